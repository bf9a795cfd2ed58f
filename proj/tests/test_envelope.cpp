// Copyright 2026 The orlicz-gamma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "orlicz/envelope.hpp"

namespace orlicz {
namespace {

const std::vector<int> kLadder{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};

double well(double s, double kr = 0.1, double kl = 0.1) {
  return std::min(std::abs(s - 1) + kr, std::abs(s + 1) + kl);
}

TEST(ConvexEnvelope, ConvexInputUnchanged) {
  const auto d = SampledDensity::sample([](double s) { return s * s; }, 2, 201);
  const EnvelopeResult e = convex_envelope(d);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(e.values[i], d.values[i], 1e-15);
  EXPECT_LE(e.certified_gap, 1e-15);
}

TEST(ConvexEnvelope, QuadraticWells) {
  const auto d =
      SampledDensity::sample([](double s) { return std::min((s - 1) * (s - 1), (s + 1) * (s + 1)); }, 2, 401);
  const EnvelopeResult e = convex_envelope(d);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double s = d.xi[i];
    const double expect = std::abs(s) <= 1 ? 0.0 : (std::abs(s) - 1) * (std::abs(s) - 1);
    EXPECT_NEAR(e.values[i], expect, 1e-12) << s;
  }
  EXPECT_EQ(e.values, oracle::chord_minimum(d.xi, d.values));
}

TEST(ConvexEnvelope, InteriorBumpIgnored) {
  auto d = SampledDensity::sample([](double s) { return std::abs(s); }, 1, 101);
  const auto base = convex_envelope(d).values;
  d.values[30] += 5.0;
  EXPECT_EQ(convex_envelope(d).values, base);
}

TEST(ConvexEnvelope, MatchesChordOracleOnRandomData) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xi(150), v(150);
    for (std::size_t i = 0; i < xi.size(); ++i) {
      xi[i] = -1.5 + 0.02 * static_cast<double>(i);
      v[i] = rng.uniform(0, 3);
    }
    const auto d = SampledDensity::from_values(xi, v);
    const EnvelopeResult e = convex_envelope(d);
    EXPECT_EQ(e.values, oracle::chord_minimum(d.xi, d.values));
  }
}

TEST(ConvexEnvelope, Errors) {
  EXPECT_THROW(SampledDensity::sample([](double) { return 1.0; }, 1, 2), ArgumentError);
  EXPECT_THROW(SampledDensity::sample([](double s) { return s; }, 1, 5), DomainError);
  EXPECT_THROW(SampledDensity::from_values({0, 1, 1}, {1, 1, 1}), ArgumentError);
}

TEST(EnvelopeRoot, LogSpaceHandlesHugePowers) {
  const auto d = SampledDensity::sample([](double s) { return 10 + well(s); }, 4, 201);
  // 10^2048 overflows; the root must still be finite and below f.
  const auto e = envelope_root(d, 2048);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_TRUE(std::isfinite(e[i]));
    EXPECT_LE(e[i], d.values[i] * (1 + 1e-12));
  }
}

TEST(QInfinity, LevelConvexInputIsFixed) {
  const auto d = SampledDensity::sample([](double s) { return std::abs(s); }, 3, 301);
  const EnvelopeResult q = q_infinity(d, kLadder);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(q.values[i], d.values[i], 1e-12);
  EXPECT_LT(q.last_increment, 1e-6);
}

TEST(QInfinity, DoubleWellMatchesLevelSetOracle) {
  const auto d = SampledDensity::sample([](double s) { return well(s); }, 4, 801);
  const EnvelopeResult q = q_infinity(d, kLadder);
  const auto ref = oracle::level_set_convexification(d.values);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_NEAR(q.values[i], ref[i], 1e-6);
    EXPECT_NEAR(q.values[i], std::max(std::abs(d.xi[i]) - 1, 0.0) + 0.1, 1e-12);
  }
  EXPECT_TRUE(level_convexity_check(q.values).pass);
}

TEST(QInfinity, AsymmetricWellApproachesOracleAlongLadder) {
  const auto d = SampledDensity::sample([](double s) { return well(s, 0.1, 0.3); }, 4, 801);
  const auto ref = oracle::level_set_convexification(d.values);
  double prev = kInf;
  for (std::size_t k = 2; k <= kLadder.size(); k += 3) {
    const std::vector<int> lad(kLadder.begin(), kLadder.begin() + static_cast<std::ptrdiff_t>(k));
    const EnvelopeResult q = q_infinity(d, lad, {.stop_increment = 0.0});
    double err = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_LE(q.values[i], ref[i] + 1e-12);
      err = std::max(err, ref[i] - q.values[i]);
    }
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 2e-2);
}

TEST(QInfinity, ConstantInput) {
  const auto d = SampledDensity::sample([](double) { return 0.7; }, 1, 51);
  const EnvelopeResult q = q_infinity(d, kLadder);
  for (double v : q.values) EXPECT_NEAR(v, 0.7, 1e-14);
  EXPECT_LE(q.reached_n, 4);
}

TEST(QInfinity, Properties) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const double kr = rng.uniform(0.05, 1.0);
    const double kl = rng.uniform(0.05, 1.0);
    const auto d = SampledDensity::sample([&](double s) { return well(s, kr, kl); }, 3, 301);
    const EnvelopeResult q = q_infinity(d, kLadder);
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_LE(q.values[i], d.values[i] * (1 + 1e-12));
      // alpha |xi| with alpha = min(kappa, 1) stays below the envelope
      EXPECT_GE(q.values[i], std::min({kr, kl, 1.0}) * std::abs(d.xi[i]) - 1e-12);
    }
    EXPECT_TRUE(level_convexity_check(q.values).pass);
    const auto again = q_infinity(SampledDensity::from_values(d.xi, q.values), kLadder);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(again.values[i], q.values[i], 1e-8);
  }
}

TEST(QInfinity, LadderErrors) {
  const auto d = SampledDensity::sample([](double s) { return std::abs(s); }, 1, 11);
  EXPECT_THROW(q_infinity(d, std::vector<int>{}), ArgumentError);
  EXPECT_THROW(q_infinity(d, std::vector<int>{2, 2}), ArgumentError);
  EXPECT_THROW(q_infinity(d, std::vector<int>{0, 1}), ArgumentError);
}

TEST(LevelConvexity, Examples) {
  const auto v = SampledDensity::sample([](double s) { return std::abs(s); }, 2, 41);
  EXPECT_TRUE(level_convexity_check(v).pass);
  const auto w = SampledDensity::sample([](double s) { return std::min(std::abs(s - 1), std::abs(s + 1)); }, 2, 41);
  const LevelConvexityReport r = level_convexity_check(w);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(w.xi[r.witness_m], 0.0, 1e-12);
  EXPECT_NEAR(r.worst_violation, 1.0, 1e-9);
}

TEST(LevelConvexity, AgreesWithTripleBruteForce) {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(25);
    for (auto& x : v) x = std::round(rng.uniform(0, 4));
    bool brute = true;
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t m = a + 1; m < v.size(); ++m)
        for (std::size_t b = m + 1; b < v.size(); ++b) brute = brute && v[m] <= std::max(v[a], v[b]);
    EXPECT_EQ(level_convexity_check(v).pass, brute);
  }
}

TEST(MonotoneLadder, Examples) {
  const auto convex = SampledDensity::sample([](double s) { return s * s + 1; }, 2, 101);
  const LadderReport c = monotone_ladder_check(convex, kLadder);
  EXPECT_TRUE(c.pass);
  EXPECT_LT(c.max_increase, 1e-12);

  const auto flat = SampledDensity::sample([](double) { return 2.5; }, 2, 101);
  EXPECT_TRUE(monotone_ladder_check(flat, kLadder).pass);

  const auto asym = SampledDensity::sample([](double s) { return well(s, 0.1, 0.3); }, 2, 401);
  const LadderReport a = monotone_ladder_check(asym, kLadder);
  EXPECT_TRUE(a.pass);
  EXPECT_GT(a.max_increase, 1e-3);
}

TEST(MonotoneLadder, SymmetricWellIsFlatAcrossLadder) {
  const auto d = SampledDensity::sample([](double s) { return well(s); }, 2, 401);
  const LadderReport r = monotone_ladder_check(d, kLadder);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.max_increase, 1e-12);
}

TEST(EnvelopeTable, Columns) {
  const auto d = SampledDensity::sample([](double s) { return well(s); }, 2, 11);
  const ConvergenceReport r = envelope_table(d, q_infinity(d, kLadder));
  EXPECT_EQ(r.columns, (std::vector<std::string>{"xi", "f", "q_inf_f", "reached_n"}));
  EXPECT_EQ(r.rows.size(), 11u);
}

TEST(EnvelopeResult, InterpolatesAndRejectsOutside) {
  const auto d = SampledDensity::sample([](double s) { return std::abs(s); }, 1, 3);
  const EnvelopeResult e = convex_envelope(d);
  EXPECT_DOUBLE_EQ(e(0.5), 0.5);
  EXPECT_THROW(e(1.5), DomainError);
}

}  // namespace
}  // namespace orlicz

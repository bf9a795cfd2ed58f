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

#include "orlicz/norms.hpp"
#include "orlicz/suite.hpp"

namespace orlicz {
namespace {

std::vector<double> identity_field(const Grid& g) {
  return sample_cells(g, [](const Point& x) { return x[0]; });
}

TEST(Modular, Examples) {
  const Grid g = Grid::interval(0, 1, 20);
  EXPECT_DOUBLE_EQ(modular(PhiFunction::constant_power(2), g, std::vector<double>(20, 2.0)).value, 4.0);
  std::vector<double> f(20, 0.9);
  f[7] = 0.2;
  EXPECT_EQ(modular(PhiFunction::infinity_indicator(), g, f).value, 0.0);
  f[3] = 1.1;
  EXPECT_EQ(modular(PhiFunction::infinity_indicator(), g, f).value, kInf);
  EXPECT_DOUBLE_EQ(modular(PhiFunction::variable_exponent(Coefficient::affine(2, 1)), g, std::vector<double>(20, 1.0)).value,
                   1.0);
}

TEST(Modular, RejectsNegativeAndMismatch) {
  const Grid g = Grid::interval(0, 1, 4);
  const PhiFunction phi = PhiFunction::constant_power(2);
  EXPECT_THROW(modular(phi, g, std::vector<double>{1, -1, 0, 0}), DomainError);
  EXPECT_THROW(modular(phi, g, std::vector<double>{1, 1}), ArgumentError);
}

TEST(LogModular, ClosedFormAtHugeExponent) {
  const Grid g = Grid::interval(0, 1, 10);
  const PhiFunction phi = PhiFunction::constant_power(4096, true);
  EXPECT_NEAR(log_modular(phi, g, std::vector<double>(10, 1.5)), 4096 * std::log(1.5) - std::log(4096.0), 1e-9);
  EXPECT_EQ(log_modular(phi, g, std::vector<double>(10, 0.0)), -kInf);
}

TEST(Luxemburg, ConstantFieldGivesConstant) {
  const Grid g = Grid::interval(0, 1, 16);
  for (double p : {1.0, 2.0, 7.5, 300.0})
    for (double c : {0.01, 1.0, 42.0})
      EXPECT_NEAR(luxemburg_norm(PhiFunction::constant_power(p), g, std::vector<double>(16, c), 1e-12).value, c,
                  2e-12 + 1e-12 * c);
}

TEST(Luxemburg, IdentityFieldSquareNorm) {
  const Grid g = Grid::interval(0, 1, 1000);
  const NormValue n = luxemburg_norm(PhiFunction::constant_power(2), g, identity_field(g), 1e-10);
  // midpoint rule: sum (x_c)^2 h = 1/3 - h^2/12
  const double h = 1e-3;
  EXPECT_NEAR(n.value, std::sqrt(1.0 / 3 - h * h / 12), 1e-10);
  EXPECT_NEAR(n.value, 1.0 / std::sqrt(3.0), 1e-6);
  EXPECT_LE(n.achieved_tol, 1e-10);
}

TEST(Luxemburg, IndicatorShortCircuitIsExact) {
  const Grid g = Grid::box({0, 0}, {1, 1}, 7, 5);
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const auto f = random_field(rng, g.cell_count());
    const NormValue n = luxemburg_norm(PhiFunction::infinity_indicator(), g, f, 1e-3);
    EXPECT_EQ(n.value, sup_cellwise(f));
    EXPECT_EQ(n.achieved_tol, 0.0);
  }
}

TEST(Luxemburg, ZeroFieldAndErrors) {
  const Grid g = Grid::interval(0, 1, 4);
  const PhiFunction phi = PhiFunction::constant_power(3);
  EXPECT_EQ(luxemburg_norm(phi, g, std::vector<double>(4, 0.0), 1e-9).value, 0.0);
  EXPECT_THROW(luxemburg_norm(phi, g, std::vector<double>(4, 1.0), 0.0), ArgumentError);
}

TEST(Luxemburg, HomogeneousForPowers) {
  const Grid g = Grid::interval(0, 1, 64);
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    const PhiFunction phi = PhiFunction::constant_power(rng.uniform(1, 20));
    const auto f = random_field(rng, g.cell_count());
    const double s = std::pow(10.0, rng.uniform(-2, 2));
    std::vector<double> sf = f;
    for (auto& v : sf) v *= s;
    const double tol = 1e-10;
    const double a = luxemburg_norm(phi, g, sf, tol).value;
    const double b = s * luxemburg_norm(phi, g, f, tol).value;
    EXPECT_NEAR(a, b, 2 * tol * std::max(1.0, s));
  }
}

TEST(Luxemburg, MonotoneInField) {
  const Grid g = Grid::interval(0, 1, 32);
  Rng rng(6);
  for (int i = 0; i < 60; ++i) {
    const PhiFunction phi = random_catalog_entry(rng, i % 9);
    const auto f = random_field(rng, g.cell_count());
    std::vector<double> larger = f;
    for (auto& v : larger) v += rng.uniform() * v;
    const double tol = 1e-10;
    EXPECT_LE(luxemburg_norm(phi, g, f, tol).value, luxemburg_norm(phi, g, larger, tol).value + 2 * tol);
  }
}

TEST(LpNorm, PowerMeanLadder) {
  const Grid g = Grid::interval(0, 3, 40);
  Rng rng(10);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_field(rng, g.cell_count());
    double prev = 0.0;
    for (double p = 1; p <= 4096; p *= 2) {
      const double m = lp_norm(g, f, p) / std::pow(g.measure(), 1.0 / p);
      EXPECT_GE(m, prev * (1 - 1e-12));
      prev = m;
    }
    EXPECT_LE(prev, lp_norm(g, f, kInf) * (1 + 1e-12));
  }
}

TEST(UnitBall, Examples) {
  const Grid g = Grid::interval(0, 1, 8);
  const UnitBallReport r = unit_ball_check(PhiFunction::constant_power(3), g, std::vector<double>(8, 0.8));
  EXPECT_NEAR(r.norm, 0.8, 1e-9);
  EXPECT_NEAR(r.modular, 0.512, 1e-12);
  EXPECT_TRUE(r.first_applies);
  EXPECT_TRUE(r.pass());

  std::vector<double> f(8, 0.5);
  f[2] = 1.0;
  const UnitBallReport ri = unit_ball_check(PhiFunction::infinity_indicator(), g, f);
  EXPECT_EQ(ri.modular, 0.0);
  EXPECT_EQ(ri.norm, 1.0);
  EXPECT_TRUE(ri.second_applies);
  EXPECT_TRUE(ri.pass());
}

TEST(UnitBall, CatalogProperty) {
  const Grid g = Grid::interval(0, 1, 32);
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const PhiFunction phi = random_catalog_entry(rng);
    EXPECT_TRUE(unit_ball_check(phi, g, random_field(rng, g.cell_count())).pass()) << describe(phi);
  }
}

TEST(Embedding, ConstantFormula) {
  const Grid g = Grid::interval(0, 1, 16);
  const SamplePlan plan = SamplePlan::standard(g, 16);
  for (double p : {1.0, 2.0, 100.0}) {
    const EmbeddingVerifier v(PhiFunction::constant_power(p), g, p, 1, 1, plan);
    EXPECT_NEAR(v.constant(), std::pow(4.0, 1.0 / p), 1e-15);
  }
  EXPECT_NEAR(EmbeddingVerifier(PhiFunction::constant_power(100), g, 100, 1, 1, plan).constant(), 1.013959479790029,
              1e-12);
  const EmbeddingReport z = embedding_check(PhiFunction::constant_power(3), g, std::vector<double>(16, 0.0), 3, 1, 1);
  EXPECT_EQ(z.lp_norm, 0.0);
  EXPECT_EQ(z.phi_norm, 0.0);
  EXPECT_TRUE(z.pass);
}

TEST(Embedding, RejectsFailingHypothesesByName) {
  const Grid g = Grid::interval(0, 1, 16);
  const SamplePlan plan = SamplePlan::standard(g, 16);
  try {
    EmbeddingVerifier(PhiFunction::scaled_power(4, 2), g, 4, 1, 1, plan);
    FAIL() << "anchor violation accepted";
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("(H4)"), std::string::npos);
  }
  try {
    EmbeddingVerifier(PhiFunction::constant_power(2), g, 3, 1, 1, plan);
    FAIL() << "(aInc) violation accepted";
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("(aInc)"), std::string::npos);
  }
}

TEST(Embedding, CatalogProperty) {
  const Grid g = Grid::interval(0, 1, 32);
  const auto xs = g.cell_centers();
  const SamplePlan plan = SamplePlan::standard(g, 16);
  Rng rng(31);
  for (int i = 0; i < 80; ++i) {
    const PhiFunction phi = random_catalog_entry(rng, i % 8);
    const PhiClaims c = nominal_claims(phi, xs);
    const EmbeddingVerifier v(phi, g, c.aInc_rate, c.aInc_constant, c.anchor_c, plan);
    for (int k = 0; k < 3; ++k) EXPECT_TRUE(v.check(random_field(rng, g.cell_count())).pass) << describe(phi);
  }
}

TEST(Holder, Examples) {
  const Grid g = Grid::interval(0, 1, 50);
  Rng rng(2);
  const auto f = random_field(rng, 50, true);
  const HolderReport cs = holder_check(g, f, f, Coefficient::constant(2));
  EXPECT_DOUBLE_EQ(cs.constant, 1.0);
  EXPECT_TRUE(cs.pass);
  // Cauchy-Schwarz with f = g is an equality
  EXPECT_NEAR(cs.integral_abs_fg, cs.rhs, 1e-9 * (cs.norm_f + cs.norm_g));

  for (int i = 0; i < 30; ++i) {
    const HolderReport r =
        holder_check(g, random_field(rng, 50, true), random_field(rng, 50, true), Coefficient::affine(2, 1));
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.constant, 1.0);
  }
  const HolderReport z = holder_check(g, std::vector<double>(50, 0.0), f, Coefficient::affine(2, 1));
  EXPECT_EQ(z.integral_abs_fg, 0.0);
  EXPECT_TRUE(z.pass);
  EXPECT_THROW(holder_check(g, f, f, Coefficient::constant(1)), DomainError);
}

TEST(Sandwich, Examples) {
  const Grid g = Grid::interval(0, 1, 40);
  Rng rng(5);
  const auto f = random_field(rng, 40);
  const SandwichReport c = sandwich_check(g, f, Coefficient::constant(3));
  EXPECT_TRUE(c.pass);
  EXPECT_DOUBLE_EQ(c.lower, c.upper);
  EXPECT_NEAR(c.norm, c.lower, 2e-9);

  const SandwichReport one = sandwich_check(g, std::vector<double>(40, 1.0), Coefficient::affine(2, 1));
  EXPECT_DOUBLE_EQ(one.modular, 1.0);
  EXPECT_DOUBLE_EQ(one.lower, 1.0);
  EXPECT_DOUBLE_EQ(one.upper, 1.0);
  EXPECT_NEAR(one.norm, 1.0, 1e-9);
  EXPECT_TRUE(one.pass);

  const SandwichReport lin =
      sandwich_check(g, sample_cells(g, [](const Point& x) { return 2 * x[0]; }), Coefficient::affine(2, 2));
  EXPECT_TRUE(lin.pass);
  EXPECT_LE(lin.lower, lin.norm);
  EXPECT_LE(lin.norm, lin.upper);
}

TEST(NormConvergence, ConstantFieldHasZeroGap) {
  const Grid g = Grid::interval(0, 1, 20);
  const auto seq = ExponentSequence::ladder(PhiFunction::constant_power(1), 2, 2, 6, g.cell_centers());
  const ConvergenceReport r = norm_convergence_experiment(g, std::vector<double>(20, 0.7), seq, {.tol = 1e-12});
  for (double gap : r.column_values("gap")) EXPECT_LT(gap, 1e-11);
  EXPECT_TRUE(r.all_pass());
}

TEST(NormConvergence, IdentityFieldMatchesClosedForm) {
  const Grid g = Grid::interval(0, 1, 2000);
  const auto seq = ExponentSequence::ladder(PhiFunction::constant_power(1), 2, 2, 12, g.cell_centers());
  const ConvergenceReport r = norm_convergence_experiment(g, identity_field(g), seq);
  ASSERT_TRUE(r.all_pass());
  const auto p = r.column_values("p_minus");
  const auto norm = r.column_values("norm");
  for (std::size_t n = 0; n < p.size(); ++n) EXPECT_NEAR(norm[n], std::pow(1 + p[n], -1 / p[n]), 1e-3);
  EXPECT_LT(r.column_values("gap").back(), 3e-3);
}

TEST(NormConvergence, DoublePhaseSqueezed) {
  const Grid g = Grid::interval(0, 1, 500);
  const auto u = identity_field(g);
  const auto seq = ExponentSequence::ladder(PhiFunction::double_phase(1, 2, Coefficient::constant(1)), 2, 2, 10,
                                            g.cell_centers());
  const ConvergenceReport r = norm_convergence_experiment(g, u, seq, {.c = 2});
  ASSERT_TRUE(r.all_pass());
  const auto gaps = r.column_values("gap");
  const auto p = r.column_values("p_minus");
  for (std::size_t n = 0; n < gaps.size(); ++n) {
    // rho_{t^p} <= rho_phi <= 2 rho_{t^{2p}} on the unit ball squeezes the norm
    const double lower = lp_norm(g, u, p[n]);
    const double mod_at_one = modular(seq.entries[n], g, u).value;
    EXPECT_GE(r.rows[n][3], lower - 1e-6);
    if (mod_at_one <= 1) {
      EXPECT_LE(r.rows[n][3], 1.0 + 1e-6);
    }
  }
  EXPECT_LT(gaps.back(), gaps.front());
}

TEST(NormConvergence, HypothesisFailuresAreNamed) {
  const Grid g = Grid::interval(0, 1, 20);
  const auto u = identity_field(g);
  const auto xs = g.cell_centers();
  try {
    norm_convergence_experiment(g, u, ExponentSequence::ladder(PhiFunction::scaled_power(1, 2), 2, 2, 5, xs), {.c = 4});
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("(H4)"), std::string::npos);
  }
  try {
    norm_convergence_experiment(g, u, ExponentSequence::ladder(PhiFunction::plateau_power(1, 2), 2, 2, 5, xs),
                                {.L = 16});
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("(H3)"), std::string::npos);
  }
  const ConvergenceReport ro = norm_convergence_experiment(
      g, u, ExponentSequence::ladder(PhiFunction::scaled_power(1, 2), 2, 2, 5, xs), {.report_only = true});
  EXPECT_TRUE(ro.report_only);
  EXPECT_TRUE(ro.assertions.empty());
}

}  // namespace
}  // namespace orlicz

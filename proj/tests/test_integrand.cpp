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

#include "orlicz/integrand.hpp"

namespace orlicz {
namespace {

std::vector<Integrand> presets() {
  return {Integrand::norm(),
          Integrand::weighted(Coefficient::affine(1, 1)),
          Integrand::power(1.5),
          Integrand::power(3),
          Integrand::weighted_shift(Coefficient::affine(1, 1), Coefficient::sinusoidal(0.5, 0.25)),
          Integrand::double_well(0.1),
          Integrand::double_well(0.1, 0.3),
          Integrand::state_weighted()};
}

TEST(Integrand, ExactValues) {
  const Point x{0.5, 0};
  const std::vector<double> u{2.0};
  const std::vector<double> xi{3.0, -4.0};
  EXPECT_DOUBLE_EQ(Integrand::norm()(x, u, xi), 5.0);
  EXPECT_DOUBLE_EQ(Integrand::weighted(Coefficient::affine(1, 1))(x, u, xi), 7.5);
  EXPECT_DOUBLE_EQ(Integrand::power(2)(x, u, xi), 25.0);
  EXPECT_DOUBLE_EQ(Integrand::state_weighted()(x, u, xi), 15.0);
  EXPECT_DOUBLE_EQ(Integrand::weighted_shift(Coefficient::constant(2), Coefficient::constant(1))(x, 4.0), 6.0);
  EXPECT_DOUBLE_EQ(Integrand::double_well(0.1)(x, 1.0), 0.1);
  EXPECT_DOUBLE_EQ(Integrand::double_well(0.1)(x, -1.0), 0.1);
  EXPECT_DOUBLE_EQ(Integrand::double_well(0.1)(x, 0.0), 1.1);
  EXPECT_DOUBLE_EQ(Integrand::double_well(0.1, 0.3)(x, -1.0), 0.3);
  EXPECT_DOUBLE_EQ(Integrand::double_well(0.1)(x, 3.0), 2.1);
}

TEST(Integrand, Errors) {
  EXPECT_THROW(Integrand::power(0), ArgumentError);
  EXPECT_THROW(Integrand::double_well(0), ArgumentError);
  EXPECT_THROW(Integrand::double_well(0.1, -1.0), ArgumentError);
  const std::vector<double> u{0.0};
  const std::vector<double> xi{1.0, 1.0};
  EXPECT_THROW((void)Integrand::double_well(0.1)({0, 0}, u, xi), ArgumentError);
}

TEST(Integrand, Flags) {
  EXPECT_TRUE(Integrand::state_weighted().depends_on_u());
  EXPECT_FALSE(Integrand::norm().depends_on_u());
  EXPECT_TRUE(Integrand::double_well(0.1).scalar_only());
  EXPECT_FALSE(Integrand::double_well(0.1).convex_in_gradient());
  EXPECT_TRUE(Integrand::weighted(Coefficient::affine(1, 1)).x_dependent());
  EXPECT_FALSE(Integrand::weighted(Coefficient::constant(2)).x_dependent());
  EXPECT_TRUE(Integrand::norm().has_kinks());
  EXPECT_FALSE(Integrand::power(2).has_kinks());
}

TEST(Smooth, ConvergesToExactValue) {
  Rng rng(3);
  for (const Integrand& f : presets()) {
    for (int i = 0; i < 50; ++i) {
      const Point x{rng.uniform(), 0};
      const std::vector<double> u{rng.uniform(-2, 2)};
      const std::vector<double> xi{rng.uniform(-3, 3)};
      const double exact = f(x, u, xi);
      const double eps = 1e-7;
      EXPECT_NEAR(f.smooth(x, u, xi, eps).value, exact, 10 * eps * (1 + exact)) << kind_name(f.kind());
    }
  }
}

TEST(Smooth, DerivativesMatchFiniteDifferences) {
  Rng rng(19);
  for (const Integrand& f : presets()) {
    const int dim = f.scalar_only() ? 1 : 2;
    for (int i = 0; i < 30; ++i) {
      const Point x{rng.uniform(), 0};
      const std::vector<double> u{rng.uniform(-2, 2)};
      std::vector<double> xi(dim);
      for (auto& v : xi) v = rng.uniform(-3, 3);
      const double eps = 0.05;
      const SmoothEval s = f.smooth(x, u, xi, eps);
      const double h = 1e-5;
      for (int k = 0; k < dim; ++k) {
        auto plus = xi;
        auto minus = xi;
        plus[k] += h;
        minus[k] -= h;
        const SmoothEval sp = f.smooth(x, u, plus, eps);
        const SmoothEval sm = f.smooth(x, u, minus, eps);
        EXPECT_NEAR(s.grad(k), (sp.value - sm.value) / (2 * h), 1e-6 * (1 + std::abs(s.grad(k))))
            << kind_name(f.kind());
        for (int l = 0; l < dim; ++l)
          EXPECT_NEAR(s.hess(l, k), (sp.grad(l) - sm.grad(l)) / (2 * h), 1e-4 * (1 + std::abs(s.hess(l, k))))
              << kind_name(f.kind());
      }
    }
  }
}

TEST(Smooth, ConvexPresetsHavePsdHessian) {
  Rng rng(8);
  for (const Integrand& f : presets()) {
    if (!f.convex_in_gradient() || f.depends_on_u()) continue;
    for (int i = 0; i < 30; ++i) {
      const std::vector<double> u{0.0};
      const std::vector<double> xi{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const SmoothEval s = f.smooth({0.3, 0}, u, xi, 1e-3);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.hess);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9) << kind_name(f.kind());
    }
  }
}

TEST(Growth, CertificatesHold) {
  const auto xs = Grid::interval(0, 1, 16).cell_centers();
  for (const Integrand& f : presets()) {
    const Integrand::Growth g = f.growth(xs);
    const GrowthCheck c = check_growth(f, g, xs, f.scalar_only() ? 1 : 2);
    if (f.kind() == IntegrandKind::WeightedShift) {
      EXPECT_EQ(g.alpha, 0.0);
      EXPECT_FALSE(c.lower_pass);
      continue;
    }
    EXPECT_GT(g.alpha, 0.0) << kind_name(f.kind());
    EXPECT_TRUE(c.lower_pass) << kind_name(f.kind());
    if (g.upper_c) {
      EXPECT_TRUE(c.upper_pass) << kind_name(f.kind());
    }
  }
}

TEST(Growth, DoubleWellConstants) {
  const auto xs = Grid::interval(0, 1, 4).cell_centers();
  const Integrand::Growth g = Integrand::double_well(0.1, 0.3).growth(xs);
  EXPECT_DOUBLE_EQ(g.alpha, 0.1);
  EXPECT_DOUBLE_EQ(g.gamma, 1.0);
  ASSERT_TRUE(g.upper_c.has_value());
  EXPECT_DOUBLE_EQ(*g.upper_c, 1.3);
}

TEST(Growth, WrongConstantsAreCaught) {
  const auto xs = Grid::interval(0, 1, 4).cell_centers();
  const Integrand f = Integrand::power(2);
  EXPECT_FALSE(check_growth(f, {2.0, 2.0, 1.0}, xs, 1).lower_pass);
  EXPECT_FALSE(check_growth(f, {1.0, 2.0, 0.5}, xs, 1).upper_pass);
  EXPECT_FALSE(check_growth(f, {1.0, 1.0, std::nullopt}, xs, 1).lower_pass);
}

TEST(Tabulated, InterpolatesTable) {
  const Grid g = Grid::interval(0, 1, 4);
  const auto d = SampledDensity::sample([](double s) { return std::abs(s); }, 2, 5);
  const Integrand f = Integrand::tabulated(g, {convex_envelope(d)}, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(f({0.3, 0}, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(f({0.9, 0}, -1.5), 1.5);
  EXPECT_THROW((void)f({0.3, 0}, 3.0), DomainError);
  EXPECT_THROW(Integrand::tabulated(g, {}, 1, 1, 1), ArgumentError);
  EXPECT_THROW(Integrand::tabulated(g, {convex_envelope(d), convex_envelope(d)}, 1, 1, 1), ArgumentError);
}

}  // namespace
}  // namespace orlicz

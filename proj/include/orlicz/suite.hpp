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
#pragma once

// Seeded randomized runs of the norm inequalities over the phi catalog.

#include <cstdint>
#include <string>
#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/domain.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

/// One catalog entry with randomized parameters. Index selects the family;
/// negative picks one at random.
inline PhiFunction random_catalog_entry(Rng& rng, int family = -1) {
  constexpr int kFamilies = 9;
  const int k = family >= 0 ? family % kFamilies : static_cast<int>(rng.index(kFamilies));
  switch (k) {
    case 0: return PhiFunction::constant_power(rng.uniform(1.0, 8.0));
    case 1: return PhiFunction::variable_exponent(Coefficient::affine(rng.uniform(1.2, 3.0), rng.uniform(0.0, 3.0)));
    case 2:
      return PhiFunction::variable_exponent(Coefficient::sinusoidal(rng.uniform(2.5, 5.0), rng.uniform(-1.0, 1.0)));
    case 3: {
      const double p = rng.uniform(1.0, 4.0);
      return PhiFunction::double_phase(p, p + rng.uniform(0.0, 4.0),
                                       Coefficient::affine(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)));
    }
    case 4: {
      const double p = rng.uniform(1.5, 3.0);
      return PhiFunction::variable_double_phase(Coefficient::affine(p, rng.uniform(0.0, 1.0)),
                                                Coefficient::affine(p + 1.0 + rng.uniform(0.0, 2.0), rng.uniform(0.0, 1.0)),
                                                Coefficient::sinusoidal(1.0, rng.uniform(0.0, 1.0)));
    }
    case 5: return PhiFunction::scaled_power(rng.uniform(1.0, 6.0), rng.uniform(0.5, 2.0));
    case 6: return PhiFunction::plateau_power(rng.uniform(1.0, 5.0), rng.uniform(1.0, 3.0));
    case 7:
      return PhiFunction::weighted_power(rng.uniform(1.0, 6.0),
                                         Coefficient::affine(rng.uniform(0.5, 1.5), rng.uniform(0.0, 1.0)));
    default: return PhiFunction::infinity_indicator();
  }
}

/// Nonnegative per-cell field spanning a few decades, with scattered zeros.
inline std::vector<double> random_field(Rng& rng, std::size_t cells, bool signed_values = false) {
  const double scale = std::pow(10.0, rng.uniform(-1.5, 1.5));
  std::vector<double> g(cells);
  for (auto& v : g) {
    v = rng.uniform() < 0.1 ? 0.0 : scale * rng.uniform();
    if (signed_values && rng.uniform() < 0.5) v = -v;
  }
  return g;
}

struct SuiteOptions {
  std::uint64_t seed = 42;
  int cases = 500;
  int cells = 64;
  double tol = 1e-9;
};

/// Rows "case,check,phi,lhs,rhs,slack,pass" with slack = rhs - lhs, for the
/// unit-ball property, the L^p embedding, variable-exponent Hoelder and the
/// norm-modular sandwich (each where the catalog entry qualifies).
inline ConvergenceReport inequality_suite(const SuiteOptions& opt) {
  if (opt.cases < 1) throw ArgumentError("inequality suite needs at least one case");
  const Grid grid = Grid::interval(0.0, 1.0, opt.cells);
  const auto xs = grid.cell_centers();
  const SamplePlan plan = SamplePlan::standard(grid, 32);
  Rng rng(opt.seed);

  ConvergenceReport r;
  r.kind = "inequality-suite";
  r.columns = {"case", "check", "phi", "lhs", "rhs", "slack", "pass"};
  auto& checks = r.text["check"];
  auto& labels = r.text["phi"];
  std::size_t violations = 0;
  auto emit = [&](int id, const char* check, const std::string& label, double lhs, double rhs, bool pass) {
    r.rows.push_back({static_cast<double>(id), 0.0, 0.0, lhs, rhs, rhs - lhs, pass ? 1.0 : 0.0});
    checks.emplace_back(check);
    labels.push_back(label);
    if (!pass) ++violations;
  };

  for (int id = 0; id < opt.cases; ++id) {
    const PhiFunction phi = random_catalog_entry(rng);
    const std::string label = describe(phi);
    const auto g = random_field(rng, grid.cell_count());

    const UnitBallReport ub = unit_ball_check(phi, grid, g, opt.tol);
    if (ub.first_applies) emit(id, "unit-ball: norm<1 => rho<=1", label, ub.modular, 1.0, ub.first_holds);
    if (ub.second_applies) emit(id, "unit-ball: rho<=1 => norm<=1", label, ub.norm, 1.0, ub.second_holds);
    if (phi.is_indicator()) continue;

    const PhiClaims claims = nominal_claims(phi, xs);
    const EmbeddingReport emb =
        EmbeddingVerifier(phi, grid, claims.aInc_rate, claims.aInc_constant, claims.anchor_c, plan).check(g, opt.tol);
    emit(id, "embedding", label, emb.lp_norm, emb.constant * emb.phi_norm, emb.pass);

    const bool pure_power = (phi.kind() == PhiKind::ConstantPower || phi.kind() == PhiKind::VariableExponent) &&
                            !phi.weight() && !phi.inverse_exponent_weight();
    if (!pure_power) continue;
    const ExponentBounds eb = exponent_bounds(phi, xs);
    if (eb.minus > 1.0) {
      const auto f = random_field(rng, grid.cell_count(), true);
      const auto h = random_field(rng, grid.cell_count(), true);
      const HolderReport hr = holder_check(grid, f, h, phi.p(), opt.tol);
      emit(id, "holder", label, hr.integral_abs_fg, hr.rhs, hr.pass);
    }
    const SandwichReport sw = sandwich_check(grid, g, phi.p(), opt.tol);
    emit(id, "sandwich: lower", label, sw.lower, sw.norm, sw.pass);
    emit(id, "sandwich: upper", label, sw.norm, sw.upper, sw.pass);
  }
  r.meta["seed"] = std::to_string(opt.seed);
  r.meta["cases"] = std::to_string(opt.cases);
  r.assert_that("zero violations beyond 2 tol", violations == 0,
                std::to_string(violations) + " of " + std::to_string(r.rows.size()) + " checks failed");
  return r;
}

}  // namespace orlicz

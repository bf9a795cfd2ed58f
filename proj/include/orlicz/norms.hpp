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

// Modulars, Luxemburg norms and executable checks of the classical
// inequalities relating them. Scalar fields are per-cell samples g >= 0 on a
// Grid; integrals use the midpoint rule from domain.hpp.

#include <optional>
#include <string>
#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/domain.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

struct ModularValue {
  double value = 0.0;
};

struct NormValue {
  double value = 0.0;
  /// Width of the final bisection bracket.
  double achieved_tol = 0.0;
};

namespace detail {

inline void require_nonnegative(std::span<const double> g) {
  for (double v : g) {
    require_not_nan(v, "field");
    if (v < 0.0) throw DomainError("field must be nonnegative");
    if (!std::isfinite(v)) throw DomainError("field must be finite");
  }
}

}  // namespace detail

/// rho_phi(g) = integral of phi(x, g(x)).
inline ModularValue modular(const PhiFunction& phi, const Grid& grid, std::span<const double> g) {
  detail::require_nonnegative(g);
  if (g.size() != grid.cell_count()) throw ArgumentError("field size does not match the grid");
  std::vector<double> vals(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) vals[c] = phi(grid.cell_center(c), g[c]);
  return {integrate(grid, vals)};
}

/// log rho_phi(g / scale), overflow-free. -inf when the modular vanishes.
inline double log_modular(const PhiFunction& phi, const Grid& grid, std::span<const double> g, double scale = 1.0) {
  if (g.size() != grid.cell_count()) throw ArgumentError("field size does not match the grid");
  LogSumExp acc;
  const double log_h = std::log(grid.cell_measure());
  for (std::size_t c = 0; c < g.size(); ++c) acc.add(phi.log_value(grid.cell_center(c), g[c] / scale) + log_h);
  return acc.value();
}

/// Discrete L^p norm; p = +inf gives the cellwise sup.
inline double lp_norm(const Grid& grid, std::span<const double> g, double p) {
  detail::require_nonnegative(g);
  if (p == kInf) return sup_cellwise(g);
  if (!(p >= 1.0)) throw ArgumentError("L^p norm needs p >= 1");
  LogSumExp acc;
  const double log_h = std::log(grid.cell_measure());
  for (double v : g) acc.add(v > 0 ? p * std::log(v) + log_h : -kInf);
  const double l = acc.value();
  return l == -kInf ? 0.0 : std::exp(l / p);
}

/// inf{lambda > 0 : rho_phi(g / lambda) <= 1} by bisection on the monotone
/// map lambda -> rho_phi(g / lambda). The indicator phi_inf short-circuits
/// to the cellwise sup.
inline NormValue luxemburg_norm(const PhiFunction& phi, const Grid& grid, std::span<const double> g, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("norm tolerance must be positive");
  detail::require_nonnegative(g);
  if (phi.is_indicator()) return {sup_cellwise(g), 0.0};
  const double gmax = sup_cellwise(g);
  if (gmax == 0.0) return {0.0, 0.0};

  // rho = +inf compares as "> 1" here, which is the monotone convention.
  auto feasible = [&](double lambda) { return log_modular(phi, grid, g, lambda) <= 0.0; };

  constexpr double kExpand = 2.0;
  constexpr int kMaxDoublings = 60;
  double lo = gmax / kExpand;
  double hi = gmax * kExpand;
  int doublings = 0;
  while (feasible(lo)) {
    if (++doublings > kMaxDoublings)
      throw NumericError("luxemburg_norm: failed to bracket from below; log rho(g/lo) = " +
                         format_double(log_modular(phi, grid, g, lo)) + " at lo = " + format_double(lo));
    hi = lo;
    lo /= kExpand;
  }
  doublings = 0;
  while (!feasible(hi)) {
    if (++doublings > kMaxDoublings)
      throw NumericError("luxemburg_norm: failed to bracket from above; log rho(g/hi) = " +
                         format_double(log_modular(phi, grid, g, hi)) + " at hi = " + format_double(hi));
    lo = hi;
    hi *= kExpand;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // floating resolution reached
    (feasible(mid) ? hi : lo) = mid;
  }
  return {0.5 * (lo + hi), hi - lo};
}

// ---------------------------------------------------------------------------
// Inequality verifiers

struct UnitBallReport {
  double norm = 0.0;
  double modular = 0.0;
  /// ||g|| < 1  =>  rho(g) <= 1   (skipped when ||g|| is within tol of 1)
  bool first_applies = false;
  bool first_holds = true;
  /// rho(g) <= 1  =>  ||g|| <= 1
  bool second_applies = false;
  bool second_holds = true;
  [[nodiscard]] bool pass() const { return first_holds && second_holds; }
};

inline UnitBallReport unit_ball_check(const PhiFunction& phi, const Grid& grid, std::span<const double> g,
                                      double tol = 1e-9) {
  UnitBallReport r;
  const NormValue n = luxemburg_norm(phi, grid, g, tol);
  r.norm = n.value;
  r.modular = modular(phi, grid, g).value;
  const double slack = std::max(tol, n.achieved_tol);
  if (r.norm < 1.0 - slack) {
    r.first_applies = true;
    r.first_holds = r.modular <= 1.0 + kRelTol;
  }
  if (r.modular <= 1.0) {
    r.second_applies = true;
    r.second_holds = r.norm <= 1.0 + 2.0 * slack;
  }
  return r;
}

struct EmbeddingReport {
  double lp_norm = 0.0;
  double phi_norm = 0.0;
  double constant = 0.0;
  bool pass = false;
};

/// Verifies ||g||_{L^p} <= (2 L (|Omega| + c))^{1/p} ||g||_phi. The
/// hypotheses (anchor with c, (aInc)_p with L) are checked once on
/// construction and rejected by name when they fail.
class EmbeddingVerifier {
 public:
  EmbeddingVerifier(PhiFunction phi, Grid grid, double p, double L, double c, const SamplePlan& plan)
      : phi_(std::move(phi)), grid_(std::move(grid)), p_(p), L_(L), c_(c) {
    const AnchorReport anchor = check_anchor(phi_, c, plan.xs);
    if (!anchor.supported || !anchor.pass)
      throw HypothesisError("(H4) anchor 1/c <= phi(x,1) <= c fails: phi^-(1) = " + format_double(anchor.phi_minus_1) +
                            ", phi^+(1) = " + format_double(anchor.phi_plus_1) + ", c = " + format_double(c));
    const AIncReport ainc = check_aInc(phi_, p, L, plan);
    if (!ainc.pass)
      throw HypothesisError("(aInc)_p with constant L fails: p = " + format_double(p) + ", L = " + format_double(L) +
                            ", worst violation " + format_double(ainc.worst_violation));
    constant_ = std::pow(2.0 * L * (grid_.measure() + c), 1.0 / p);
  }

  [[nodiscard]] double constant() const { return constant_; }

  [[nodiscard]] EmbeddingReport check(std::span<const double> g, double tol = 1e-9) const {
    EmbeddingReport r;
    r.constant = constant_;
    r.lp_norm = lp_norm(grid_, g, p_);
    const NormValue n = luxemburg_norm(phi_, grid_, g, tol);
    r.phi_norm = n.value;
    const double rhs = constant_ * (r.phi_norm + std::max(tol, n.achieved_tol));
    r.pass = r.lp_norm <= rhs * (1.0 + kRelTol);
    return r;
  }

 private:
  PhiFunction phi_;
  Grid grid_;
  double p_;
  double L_;
  double c_;
  double constant_ = 0.0;
};

inline EmbeddingReport embedding_check(const PhiFunction& phi, const Grid& grid, std::span<const double> g, double p,
                                       double L, double c, double tol = 1e-9) {
  return EmbeddingVerifier(phi, grid, p, L, c, SamplePlan::standard(grid, 32)).check(g, tol);
}

struct HolderReport {
  double integral_fg = 0.0;      // |int f g|
  double integral_abs_fg = 0.0;  // int |f||g|
  double norm_f = 0.0;           // ||f||_{p(.)}
  double norm_g = 0.0;           // ||g||_{p'(.)}
  double constant = 0.0;         // 1/p^- + 1/p'^-
  double rhs = 0.0;
  bool pass = false;
};

/// |int f g| <= int |f||g| <= (1/p^- + 1/p'^-) ||f||_{p(.)} ||g||_{p'(.)}
/// with p' = p/(p-1). Needs p^- > 1 on the sample lattice.
inline HolderReport holder_check(const Grid& grid, std::span<const double> f, std::span<const double> g,
                                 const Coefficient& p, double tol = 1e-9) {
  if (f.size() != grid.cell_count() || g.size() != grid.cell_count())
    throw ArgumentError("field size does not match the grid");
  const auto xs = grid.cell_centers();
  double p_minus = kInf;
  double p_plus = 0.0;
  for (const auto& x : xs) {
    p_minus = std::min(p_minus, p(x));
    p_plus = std::max(p_plus, p(x));
  }
  if (!(p_minus > 1.0)) throw DomainError("Hoelder check needs p^- > 1");
  const double conj_minus = p_plus / (p_plus - 1.0);

  HolderReport r;
  std::vector<double> fg(f.size());
  std::vector<double> abs_f(f.size());
  std::vector<double> abs_g(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    fg[c] = f[c] * g[c];
    abs_f[c] = std::abs(f[c]);
    abs_g[c] = std::abs(g[c]);
  }
  r.integral_fg = std::abs(integrate(grid, fg));
  for (auto& v : fg) v = std::abs(v);
  r.integral_abs_fg = integrate(grid, fg);
  const NormValue nf = luxemburg_norm(PhiFunction::variable_exponent(p), grid, abs_f, tol);
  const NormValue ng = luxemburg_norm(PhiFunction::variable_exponent(p.conjugated()), grid, abs_g, tol);
  r.norm_f = nf.value;
  r.norm_g = ng.value;
  r.constant = 1.0 / p_minus + 1.0 / conj_minus;
  r.rhs = r.constant * r.norm_f * r.norm_g;
  r.pass = r.integral_fg <= r.integral_abs_fg * (1.0 + kRelTol) + kRelTol &&
           r.integral_abs_fg <= r.rhs + 2.0 * tol * (1.0 + r.rhs);
  return r;
}

struct SandwichReport {
  double modular = 0.0;
  double norm = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  bool pass = false;
};

/// min(rho^{1/p^-}, rho^{1/p^+}) <= ||u||_{p(.)} <= max(rho^{1/p^-}, rho^{1/p^+}).
inline SandwichReport sandwich_check(const Grid& grid, std::span<const double> u, const Coefficient& p,
                                     double tol = 1e-9) {
  SandwichReport r;
  const auto xs = grid.cell_centers();
  r.p_minus = kInf;
  for (const auto& x : xs) {
    r.p_minus = std::min(r.p_minus, p(x));
    r.p_plus = std::max(r.p_plus, p(x));
  }
  std::vector<double> abs_u(u.begin(), u.end());
  for (auto& v : abs_u) v = std::abs(v);
  const PhiFunction phi = PhiFunction::variable_exponent(p);
  const double log_rho = log_modular(phi, grid, abs_u);
  r.modular = std::exp(log_rho);
  const double a = log_rho == -kInf ? 0.0 : std::exp(log_rho / r.p_minus);
  const double b = log_rho == -kInf ? 0.0 : std::exp(log_rho / r.p_plus);
  r.lower = std::min(a, b);
  r.upper = std::max(a, b);
  r.norm = luxemburg_norm(phi, grid, abs_u, tol).value;
  r.pass = r.norm >= r.lower * (1.0 - kRelTol) - 2.0 * tol && r.norm <= r.upper * (1.0 + kRelTol) + 2.0 * tol;
  return r;
}

// ---------------------------------------------------------------------------

struct NormConvergenceOptions {
  double tol = 1e-6;
  double L = 1.0;
  double c = 1.0;
  double gap_threshold = 3e-3;
  /// Skip hypothesis checks and assertions.
  bool report_only = false;
};

/// Table of (n, p_n^-, p_n^+, ||u||_{phi_n}, ||u||_inf, gap, embedding
/// constant) for a ladder phi_n, with the final-gap and monotone-constant
/// assertions.
inline ConvergenceReport norm_convergence_experiment(const Grid& grid, std::span<const double> u,
                                                     const ExponentSequence& seq,
                                                     const NormConvergenceOptions& opt = {}) {
  if (seq.size() == 0) throw ArgumentError("empty exponent sequence");
  std::vector<double> abs_u(u.begin(), u.end());
  for (auto& v : abs_u) v = std::abs(v);

  if (!opt.report_only) {
    if (!seq.strictly_increasing()) throw HypothesisError("(p_n) must be strictly increasing");
    const SamplePlan plan = SamplePlan::standard(grid, 32);
    for (std::size_t n = 0; n < seq.size(); ++n) {
      const AIncReport ainc = check_aInc(seq.entries[n], seq.p_minus[n], opt.L, plan);
      if (!ainc.pass)
        throw HypothesisError("(H3) (aInc)_{p_n} with shared L fails at n = " + std::to_string(n + 1) +
                              " (estimated constant " + format_double(ainc.estimated_constant) + ")");
      const AnchorReport anchor = check_anchor(seq.entries[n], opt.c, plan.xs);
      if (!anchor.pass)
        throw HypothesisError("(H4) anchor fails at n = " + std::to_string(n + 1) + ": phi^-(1) = " +
                              format_double(anchor.phi_minus_1) + ", phi^+(1) = " + format_double(anchor.phi_plus_1));
    }
  }

  ConvergenceReport r;
  r.kind = "norm-convergence";
  r.report_only = opt.report_only;
  r.columns = {"n", "p_minus", "p_plus", "norm", "sup_norm", "gap", "embedding_constant"};
  r.rows.resize(seq.size());
  const double sup = sup_cellwise(abs_u);
  parallel_for(seq.size(), [&](std::size_t n) {
    const double norm = luxemburg_norm(seq.entries[n], grid, abs_u, opt.tol).value;
    const double constant = std::pow(2.0 * opt.L * (grid.measure() + opt.c), 1.0 / seq.p_minus[n]);
    r.rows[n] = {static_cast<double>(n + 1), seq.p_minus[n], seq.p_plus[n], norm, sup, std::abs(norm - sup), constant};
  });
  r.meta["tol"] = format_double(opt.tol);
  r.meta["cells"] = std::to_string(grid.cell_count());
  r.meta["h"] = format_double(grid.spacing(0));

  if (!opt.report_only) {
    const double last_gap = r.rows.back()[5];
    r.assert_that("final gap below threshold", last_gap < opt.gap_threshold,
                  "gap " + format_double(last_gap) + " vs " + format_double(opt.gap_threshold));
    bool mono = true;
    for (std::size_t n = 1; n < r.rows.size(); ++n) mono = mono && r.rows[n][6] < r.rows[n - 1][6];
    r.assert_that("embedding constant decreases monotonically", mono);
  }
  return r;
}

}  // namespace orlicz

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

// Energy functionals on grid functions
//
//   F_phi(u) = || f(., u, Du) ||_phi        E_phi(u) = rho_phi(f(., u, Du))
//   F_inf(u) = || f(., u, Du) ||_inf        E_inf(u) = 0 if |f| <= 1 a.e., +inf else
//
// a descent minimizer with frozen Dirichlet nodes, closed-form 1D limit
// oracles, and the finite-ladder Gamma-convergence experiments.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "orlicz/core.hpp"
#include "orlicz/domain.hpp"
#include "orlicz/envelope.hpp"
#include "orlicz/integrand.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

enum class EnergyKind { FPhi, EPhi, FInf, EInf };

inline const char* kind_name(EnergyKind k) {
  switch (k) {
    case EnergyKind::FPhi: return "F_phi";
    case EnergyKind::EPhi: return "E_phi";
    case EnergyKind::FInf: return "F_inf";
    case EnergyKind::EInf: return "E_inf";
  }
  return "?";
}

struct EnergyFunctional {
  EnergyKind kind = EnergyKind::FInf;
  std::optional<PhiFunction> phi;
  Integrand integrand = Integrand::norm();
  Grid grid;
  double norm_tol = 1e-10;
  double tol_feas = 1e-9;

  static EnergyFunctional norm(PhiFunction phi, Integrand f, Grid g) {
    return {EnergyKind::FPhi, std::move(phi), std::move(f), std::move(g)};
  }
  static EnergyFunctional modular(PhiFunction phi, Integrand f, Grid g) {
    return {EnergyKind::EPhi, std::move(phi), std::move(f), std::move(g)};
  }
  static EnergyFunctional sup(Integrand f, Grid g) { return {EnergyKind::FInf, std::nullopt, std::move(f), std::move(g)}; }
  static EnergyFunctional indicator(Integrand f, Grid g) {
    return {EnergyKind::EInf, std::nullopt, std::move(f), std::move(g)};
  }

  void validate() const {
    const bool needs_phi = kind == EnergyKind::FPhi || kind == EnergyKind::EPhi;
    if (needs_phi != phi.has_value())
      throw ArgumentError(std::string(kind_name(kind)) + (needs_phi ? " needs a phi function" : " takes no phi function"));
  }
};

/// Per-cell density f(x_c, u(x_c), Du(cell)).
inline std::vector<double> density_field(const Integrand& f, const GridFunction& u) {
  const Grid& g = u.grid();
  const GradientField du = gradient(u);
  const int d = u.codomain_dim();
  if (f.scalar_only() && du.block() != 1)
    throw ArgumentError(std::string(kind_name(f.kind())) + " integrand needs scalar gradients (N = d = 1)");
  std::vector<double> out(g.cell_count());
  std::vector<double> uc(d);
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (int k = 0; k < d; ++k) uc[k] = u.cell_value(c, k);
    out[c] = require_not_nan(f(g.cell_center(c), uc, du.cell(c)), "integrand");
  }
  return out;
}

inline double energy(const EnergyFunctional& E, const GridFunction& u) {
  E.validate();
  if (!(u.grid() == E.grid)) throw ArgumentError("grid function lives on a different grid than the functional");
  const auto F = density_field(E.integrand, u);
  switch (E.kind) {
    case EnergyKind::FPhi: return luxemburg_norm(*E.phi, E.grid, F, E.norm_tol).value;
    case EnergyKind::EPhi: return modular(*E.phi, E.grid, F).value;
    case EnergyKind::FInf: return sup_cellwise(F);
    case EnergyKind::EInf: return sup_cellwise(F) <= 1.0 + E.tol_feas ? 0.0 : kInf;
  }
  return kInf;
}

/// log E_phi(u) without overflow; for F_inf/E_inf the log of energy().
inline double log_energy(const EnergyFunctional& E, const GridFunction& u) {
  E.validate();
  if (E.kind == EnergyKind::EPhi) return log_modular(*E.phi, E.grid, density_field(E.integrand, u));
  const double v = energy(E, u);
  return v == 0.0 ? -kInf : std::log(v);
}

// ---------------------------------------------------------------------------
// Dirichlet problems

struct DirichletProblem {
  Grid grid;
  Integrand integrand = Integrand::norm();
  /// Boundary nodes carry the data; interior nodes are the start iterate
  /// when MinimizeOptions::start is Given.
  GridFunction data;

  DirichletProblem(Grid g, Integrand f, GridFunction boundary)
      : grid(std::move(g)), integrand(std::move(f)), data(std::move(boundary)) {
    if (!(data.grid() == grid)) throw ArgumentError("boundary data lives on a different grid");
  }

  /// Scalar problem with data u = g on the boundary; interior initialised to
  /// g as well.
  static DirichletProblem scalar(Grid grid, Integrand f, const std::function<double(const Point&)>& g) {
    GridFunction data = GridFunction::sample(grid, g);
    return {std::move(grid), std::move(f), std::move(data)};
  }

  /// Diameter of the boundary data's range (over all components).
  [[nodiscard]] double data_range() const {
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      if (!grid.is_boundary_node(n)) continue;
      for (int k = 0; k < data.codomain_dim(); ++k) {
        lo = std::min(lo, data.at(n, k));
        hi = std::max(hi, data.at(n, k));
      }
    }
    return hi - lo;
  }

  /// Interpolant of the boundary data: linear in x1 for 1D grids, otherwise
  /// the data itself (interior kept).
  [[nodiscard]] GridFunction affine_start() const {
    GridFunction u = data;
    if (grid.dim() != 1) return u;
    const std::size_t last = grid.node_count() - 1;
    for (std::size_t n = 1; n < last; ++n) {
      const double s = static_cast<double>(n) / static_cast<double>(last);
      for (int k = 0; k < u.codomain_dim(); ++k) u.at(n, k) = (1.0 - s) * data.at(0, k) + s * data.at(last, k);
    }
    return u;
  }
};

struct MinimizeOptions {
  enum class Start { Auto, Given, Affine, Laminate };

  Start start = Start::Auto;
  bool smoothing = true;
  /// Smoothing radius; negative selects 1e-6 * max(1, data range).
  double eps = -1.0;
  /// Stop when ||d log J / du||_inf drops below gtol * (largest exponent).
  double gtol = 1e-10;
  /// Stop when the predicted relative decrease of the modular is below this.
  double decrement_tol = 1e-15;
  int max_iterations = 400;
  /// Outer rescaling passes when minimizing a non-homogeneous Luxemburg norm.
  int max_outer = 40;
  double envelope_radius = 4.0;
  std::size_t envelope_points = 801;
};

struct MinimizeResult {
  GridFunction u;
  /// Unsmoothed energy of the returned iterate.
  double value = kInf;
  /// log of the unsmoothed modular rho_phi(f(Du)), for norm and modular runs alike.
  double log_modular = kInf;
  int iterations = 0;
  double grad_norm = kInf;
  bool converged = false;
  bool hit_iteration_cap = false;
  double eps = 0.0;
};

namespace detail {

/// d xi_c[row] / d u[node, k] = coef for the listed nodes.
struct Stencil {
  std::size_t node;
  int component;
  int row;
  double coef;
};

inline std::vector<Stencil> cell_stencil(const Grid& g, std::size_t c, int d) {
  const auto nodes = g.cell_nodes(c);
  const int n_dim = g.dim();
  std::vector<Stencil> s;
  const double hx = g.spacing(0);
  for (int k = 0; k < d; ++k) {
    s.push_back({nodes[0], k, k * n_dim, -1.0 / hx});
    s.push_back({nodes[1], k, k * n_dim, 1.0 / hx});
    if (n_dim == 2) {
      const double hy = g.spacing(1);
      s.push_back({nodes[0], k, k * n_dim + 1, -1.0 / hy});
      s.push_back({nodes[2], k, k * n_dim + 1, 1.0 / hy});
    }
  }
  return s;
}

inline bool homogeneous(const PhiFunction& phi) {
  switch (phi.kind()) {
    case PhiKind::ConstantPower: return true;
    case PhiKind::VariableExponent: return phi.p().shape == Coefficient::Shape::Constant && !phi.p().conjugate;
    case PhiKind::Orlicz: return phi.orlicz_shape() == OrliczShape::ScaledPower;
    default: return false;
  }
}

/// Smoothed modular objective  J(u) = sum_c |c| phi(x_c, f_eps(x_c, u_c, Du_c) / lambda)
/// over the interior nodal unknowns, evaluated in the log domain.
class ModularObjective {
 public:
  ModularObjective(const DirichletProblem& P, const PhiFunction& phi, double lambda, double eps)
      : P_(P), phi_(phi), lambda_(lambda), eps_(eps), d_(P.data.codomain_dim()) {
    const Grid& g = P.grid;
    var_of_.assign(g.node_count() * d_, -1);
    for (std::size_t n = 0; n < g.node_count(); ++n)
      if (!g.is_boundary_node(n))
        for (int k = 0; k < d_; ++k) var_of_[n * d_ + k] = n_vars_++;
    stencils_.resize(g.cell_count());
    centers_.resize(g.cell_count());
    monomials_.resize(g.cell_count());
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      stencils_[c] = cell_stencil(g, c, d_);
      centers_[c] = g.cell_center(c);
      monomials_[c] = phi.monomials(centers_[c]);
    }
    log_h_ = std::log(g.cell_measure());
    block_ = g.dim() * d_;
  }

  [[nodiscard]] int n_vars() const { return n_vars_; }
  [[nodiscard]] double max_exponent() const {
    double e = 1.0;
    for (const auto& m : monomials_)
      for (int k = 0; k < m.size; ++k) e = std::max(e, m.terms[k].exponent);
    return e;
  }

  [[nodiscard]] Eigen::VectorXd pack(const GridFunction& u) const {
    Eigen::VectorXd x(n_vars_);
    for (std::size_t i = 0; i < var_of_.size(); ++i)
      if (var_of_[i] >= 0) x(var_of_[i]) = u.values()[i];
    return x;
  }
  void unpack(const Eigen::VectorXd& x, GridFunction& u) const {
    for (std::size_t i = 0; i < var_of_.size(); ++i)
      if (var_of_[i] >= 0) u.values()[i] = x(var_of_[i]);
  }

  /// log J at the nodal field u.
  [[nodiscard]] double log_value(const GridFunction& u) const {
    LogSumExp acc;
    std::vector<double> xi(block_);
    std::vector<double> uc(d_);
    for (std::size_t c = 0; c < stencils_.size(); ++c) {
      const double f = cell_density(u, c, xi, uc);
      acc.add(log_h_ + monomials_[c].log_value(f / lambda_));
    }
    return acc.value();
  }

  struct Derivatives {
    double log_j = 0.0;  // log J
    double scaled_j = 0.0;  // J / S
    Eigen::VectorXd grad;   // d(J/S)/dx
    Eigen::SparseMatrix<double> hess;  // PSD-projected d^2(J/S)/dx^2
  };

  /// Derivatives of J / S with S = max_c (cell term), so the largest cell
  /// contributes exactly 1.
  [[nodiscard]] Derivatives derivatives(const GridFunction& u) const {
    const std::size_t nc = stencils_.size();
    std::vector<double> logs(nc);
    std::vector<SmoothEval> evals(nc);
    std::vector<double> uc(d_);
    std::vector<double> xi(block_);
    double log_s = -kInf;
    for (std::size_t c = 0; c < nc; ++c) {
      fill_cell(u, c, xi, uc);
      evals[c] = P_.integrand.smooth(centers_[c], uc, xi, eps_);
      logs[c] = log_h_ + monomials_[c].log_value(evals[c].value / lambda_);
      log_s = std::max(log_s, logs[c]);
    }
    Derivatives r;
    r.grad = Eigen::VectorXd::Zero(n_vars_);
    std::vector<Eigen::Triplet<double>> trips;
    CompensatedSum js;
    for (std::size_t c = 0; c < nc; ++c) {
      const double w = std::exp(logs[c] - log_s);
      js.add(w);
      if (w == 0.0) continue;
      const double t = evals[c].value / lambda_;
      if (t <= 0.0) continue;
      const auto [d1, d2] = monomials_[c].log_derivative_ratios(t);
      const Eigen::VectorXd& gf = evals[c].grad;
      const Eigen::VectorXd gxi = (w * d1 / lambda_) * gf;
      Eigen::MatrixXd hxi = (w * d2 / (lambda_ * lambda_)) * (gf * gf.transpose()) + (w * d1 / lambda_) * evals[c].hess;
      project_psd(hxi);
      const auto& st = stencils_[c];
      for (const auto& a : st) {
        const int va = var_of_[a.node * d_ + a.component];
        if (va < 0) continue;
        r.grad(va) += a.coef * gxi(a.row);
        for (const auto& b : st) {
          const int vb = var_of_[b.node * d_ + b.component];
          if (vb < 0) continue;
          const double h = a.coef * b.coef * hxi(a.row, b.row);
          if (h != 0.0) trips.emplace_back(va, vb, h);
        }
      }
    }
    r.scaled_j = js.value();
    r.log_j = log_s + std::log(r.scaled_j);
    r.hess.resize(n_vars_, n_vars_);
    r.hess.setFromTriplets(trips.begin(), trips.end());
    return r;
  }

 private:
  void fill_cell(const GridFunction& u, std::size_t c, std::vector<double>& xi, std::vector<double>& uc) const {
    std::fill(xi.begin(), xi.end(), 0.0);
    for (const auto& s : stencils_[c]) xi[s.row] += s.coef * u.at(s.node, s.component);
    if (P_.integrand.depends_on_u())
      for (int k = 0; k < d_; ++k) uc[k] = u.cell_value(c, k);
  }

  double cell_density(const GridFunction& u, std::size_t c, std::vector<double>& xi, std::vector<double>& uc) const {
    fill_cell(u, c, xi, uc);
    return P_.integrand.smooth(centers_[c], uc, xi, eps_).value;
  }

  static void project_psd(Eigen::MatrixXd& h) {
    if (h.rows() == 1) {
      h(0, 0) = std::max(h(0, 0), 0.0);
      return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    h = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  }

  const DirichletProblem& P_;
  const PhiFunction& phi_;
  double lambda_;
  double eps_;
  int d_;
  int n_vars_ = 0;
  int block_ = 1;
  double log_h_ = 0.0;
  std::vector<int> var_of_;
  std::vector<std::vector<Stencil>> stencils_;
  std::vector<Point> centers_;
  std::vector<Monomials> monomials_;
};

struct DescentStats {
  int iterations = 0;
  double grad_norm = kInf;
  bool converged = false;
  bool hit_cap = false;
};

/// Projected-Newton descent with Armijo backtracking on J / S. Each accepted
/// step strictly decreases J.
inline DescentStats descend(const ModularObjective& obj, GridFunction& u, const MinimizeOptions& opt) {
  DescentStats st;
  if (obj.n_vars() == 0) {
    st.converged = true;
    st.grad_norm = 0.0;
    return st;
  }
  const double gtol = opt.gtol * obj.max_exponent();
  GridFunction trial = u;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const auto D = obj.derivatives(u);
    st.grad_norm = D.grad.cwiseAbs().maxCoeff() / D.scaled_j;
    if (st.grad_norm <= gtol) {
      st.converged = true;
      return st;
    }
    Eigen::VectorXd dir;
    Eigen::SparseMatrix<double> H = D.hess;
    double diag_max = 0.0;
    for (int i = 0; i < H.rows(); ++i) diag_max = std::max(diag_max, H.coeff(i, i));
    const double mu = 1e-12 * std::max(diag_max, 1e-300);
    for (int i = 0; i < H.rows(); ++i) H.coeffRef(i, i) += mu;
    solver.compute(H);
    if (solver.info() == Eigen::Success) dir = -solver.solve(D.grad);
    double slope = dir.size() ? D.grad.dot(dir) : 0.0;
    if (!(slope < 0.0) || !dir.allFinite()) {
      dir = -D.grad;
      slope = D.grad.dot(dir);
    }
    if (-slope / D.scaled_j <= opt.decrement_tol) {
      st.converged = true;
      return st;
    }
    const Eigen::VectorXd x0 = obj.pack(u);
    const double log_s = D.log_j - std::log(D.scaled_j);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      obj.unpack(x0 + alpha * dir, trial);
      const double lj = obj.log_value(trial);
      const double scaled = std::exp(lj - log_s);
      if (std::isfinite(scaled) && scaled <= D.scaled_j + 1e-4 * alpha * slope && lj < D.log_j) {
        accepted = true;
        break;
      }
    }
    st.iterations = it + 1;
    if (!accepted) {
      // No representable decrease left along the descent direction.
      st.converged = true;
      return st;
    }
    std::swap(u, trial);
  }
  st.hit_cap = true;
  return st;
}

}  // namespace detail

/// Laminate start for 1D scalar problems with a non-convex density: cells
/// whose mean slope falls in a flat stretch of the convex envelope of
/// phi(f(x_c, .)) are assigned the stretch's end slopes in the envelope's
/// proportions, spread evenly along the interval.
inline GridFunction laminate_start(const DirichletProblem& P, const PhiFunction& phi, double radius,
                                   std::size_t points) {
  const Grid& g = P.grid;
  if (g.dim() != 1 || P.data.codomain_dim() != 1) throw ArgumentError("laminate start is 1D scalar only");
  const std::size_t m = g.cell_count();
  const std::size_t last = g.node_count() - 1;
  const double h = g.spacing(0);
  const double mean = (P.data.at(last) - P.data.at(0)) / (g.upper()[0] - g.lower()[0]);
  if (std::abs(mean) >= radius) throw ArgumentError("mean slope outside the envelope lattice");

  std::vector<double> xi(points);
  const double step = 2.0 * radius / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) xi[i] = -radius + static_cast<double>(i) * step;

  std::vector<double> lo(m, mean), hi(m, mean), theta(m, 0.0);
  std::vector<double> logs(points);
  for (std::size_t c = 0; c < m; ++c) {
    const Point x = g.cell_center(c);
    for (std::size_t i = 0; i < points; ++i) logs[i] = phi.log_value(x, P.integrand(x, xi[i]));
    const auto env = log_convex_envelope(xi, logs);
    // hull vertices are where the envelope touches the density
    std::size_t a = 0;
    std::size_t b = points - 1;
    for (std::size_t i = 0; i < points; ++i) {
      const bool touches = env[i] >= logs[i] - 1e-12 * (1.0 + std::abs(logs[i]));
      if (!touches) continue;
      if (xi[i] <= mean) a = i;
      if (xi[i] >= mean) {
        b = i;
        break;
      }
    }
    if (b > a + 1) {
      lo[c] = xi[a];
      hi[c] = xi[b];
      theta[c] = (mean - xi[a]) / (xi[b] - xi[a]);
    }
  }
  std::vector<double> slope(m);
  double acc = 0.0;
  double placed = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    acc += theta[c];
    const bool take_hi = std::floor(acc + 0.5) > placed;
    if (take_hi) placed += 1.0;
    slope[c] = theta[c] == 0.0 ? mean : (take_hi ? hi[c] : lo[c]);
  }
  double total = 0.0;
  for (double s : slope) total += s;
  const double shift = (total - mean * static_cast<double>(m)) / static_cast<double>(m);
  GridFunction u = P.data;
  double val = P.data.at(0);
  for (std::size_t c = 0; c + 1 < m; ++c) {
    val += (slope[c] - shift) * h;
    u.at(c + 1) = val;
  }
  return u;
}

/// Minimizes E_phi or F_phi over the interior nodes of P. F_phi is reached
/// through the modular of f / lambda with lambda re-set to the current norm
/// until it stops decreasing; for homogeneous phi one pass suffices.
inline MinimizeResult minimize(const DirichletProblem& P, const EnergyFunctional& E, const MinimizeOptions& opt = {}) {
  E.validate();
  if (E.kind != EnergyKind::EPhi && E.kind != EnergyKind::FPhi)
    throw ArgumentError("minimize handles E_phi and F_phi; supremal energies are evaluated, not minimized");
  if (!(P.grid == E.grid)) throw ArgumentError("problem and functional live on different grids");
  const PhiFunction& phi = *E.phi;
  if (!phi.has_monomials()) throw ArgumentError("minimize needs a differentiable phi (power-type catalog entry)");
  if (P.integrand.kind() == IntegrandKind::Tabulated) throw ArgumentError("minimize needs a differentiable integrand");
  if (P.integrand.has_kinks() && !opt.smoothing)
    throw ArgumentError(std::string(kind_name(P.integrand.kind())) + " integrand has kinks; enable smoothing");
  if (P.integrand.scalar_only() && P.grid.dim() * P.data.codomain_dim() != 1)
    throw ArgumentError("scalar-gradient integrand on a vector problem");

  MinimizeResult r{P.data};
  r.eps = opt.eps >= 0.0 ? opt.eps : 1e-6 * std::max(1.0, P.data_range());
  if (!opt.smoothing) r.eps = 0.0;

  const bool one_d_scalar = P.grid.dim() == 1 && P.data.codomain_dim() == 1;
  switch (opt.start) {
    case MinimizeOptions::Start::Given: r.u = P.data; break;
    case MinimizeOptions::Start::Affine: r.u = P.affine_start(); break;
    case MinimizeOptions::Start::Laminate:
      r.u = laminate_start(P, phi, opt.envelope_radius, opt.envelope_points);
      break;
    case MinimizeOptions::Start::Auto:
      r.u = one_d_scalar && !P.integrand.convex_in_gradient()
                ? laminate_start(P, phi, opt.envelope_radius, opt.envelope_points)
                : (P.grid.dim() == 1 ? P.affine_start() : P.data);
      break;
  }

  const bool outer = E.kind == EnergyKind::FPhi && !detail::homogeneous(phi);
  double lambda = 1.0;
  if (outer) lambda = std::max(energy(E, r.u), 1e-300);
  for (int pass = 0; pass < (outer ? opt.max_outer : 1); ++pass) {
    detail::ModularObjective obj(P, phi, lambda, r.eps);
    const auto st = detail::descend(obj, r.u, opt);
    r.iterations += st.iterations;
    r.grad_norm = st.grad_norm;
    r.converged = st.converged;
    r.hit_iteration_cap = st.hit_cap;
    if (!outer) break;
    const double next = energy(E, r.u);
    if (!(next < lambda * (1.0 - 1e-12))) break;
    lambda = next;
  }
  r.value = energy(E, r.u);
  r.log_modular = log_modular(phi, P.grid, density_field(P.integrand, r.u));
  return r;
}

// ---------------------------------------------------------------------------
// Limit oracles (1D)

/// Canonical minimizer and minimum of the supremal limit problem
/// min ||Q_inf f(., Du)||_inf with the problem's boundary data.
struct LimitOracle {
  double value = 0.0;
  std::function<double(const Point&)> u;
  /// L^p minimizers converge to u (strictly convex presets).
  bool unique_minimizer = false;
  /// Q_inf f = f, so F_n(u) itself converges to the value.
  bool constant_recovery = false;
  std::string description;
};

namespace detail {

/// int_a^b 1/w for a coefficient preset: closed form for constant/affine,
/// composite Simpson otherwise.
inline double integral_inverse(const Coefficient& w, double a, double b) {
  if (w.conjugate) throw ArgumentError("weight cannot be a conjugate exponent");
  if (w.shape == Coefficient::Shape::Constant) return (b - a) / w.a;
  if (w.shape == Coefficient::Shape::Affine && w.b != 0.0)
    return std::log((w.a + w.b * b) / (w.a + w.b * a)) / w.b;
  if (w.shape == Coefficient::Shape::Affine) return (b - a) / w.a;
  const int n = 200000;
  const double h = (b - a) / n;
  CompensatedSum s;
  for (int i = 0; i <= n; ++i) {
    const double x = a + i * h;
    const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s.add(wt / w({x, 0.0}));
  }
  return s.value() * h / 3.0;
}

}  // namespace detail

/// Closed-form 1D oracles for the scalar presets; nullopt otherwise.
inline std::optional<LimitOracle> limit_oracle(const DirichletProblem& P, double envelope_radius = 4.0,
                                               std::size_t envelope_points = 801, std::span<const int> ladder = {}) {
  const Grid& g = P.grid;
  if (g.dim() != 1 || P.data.codomain_dim() != 1) return std::nullopt;
  const double a = g.lower()[0];
  const double b = g.upper()[0];
  const double ua = P.data.at(0);
  const double ub = P.data.at(g.node_count() - 1);
  const double slope = (ub - ua) / (b - a);
  const Integrand& f = P.integrand;
  LimitOracle o;
  switch (f.kind()) {
    case IntegrandKind::Norm:
      o.value = std::abs(slope);
      o.u = [=](const Point& x) { return ua + slope * (x[0] - a); };
      o.unique_minimizer = o.constant_recovery = true;
      o.description = "affine interpolant, |slope|";
      return o;
    case IntegrandKind::Power:
      o.value = std::pow(std::abs(slope), f.gamma_param());
      o.u = [=](const Point& x) { return ua + slope * (x[0] - a); };
      o.unique_minimizer = o.constant_recovery = f.gamma_param() >= 1.0;
      o.description = "affine interpolant, |slope|^gamma";
      return o;
    case IntegrandKind::Weighted:
    case IntegrandKind::WeightedShift: {
      const Coefficient w = f.weight();
      const Coefficient sh = f.shift();
      for (const Point& x : g.cell_centers())
        if (!(w(x) > 0)) return std::nullopt;
      // equalized slope: w (u' - b) = +-m with int u' = ub - ua
      const double inv = detail::integral_inverse(w, a, b);
      double shift_int = 0.0;
      if (f.kind() == IntegrandKind::WeightedShift) {
        if (sh.shape == Coefficient::Shape::Constant) shift_int = sh.a * (b - a);
        else if (sh.shape == Coefficient::Shape::Affine) shift_int = sh.a * (b - a) + 0.5 * sh.b * (b * b - a * a);
        else return std::nullopt;
      }
      const double excess = (ub - ua) - shift_int;
      o.value = std::abs(excess) / inv;
      const double signed_m = excess / inv;
      const bool shifted = f.kind() == IntegrandKind::WeightedShift;
      o.u = [=](const Point& x) {
        double v = ua + signed_m * detail::integral_inverse(w, a, x[0]);
        if (shifted) {
          if (sh.shape == Coefficient::Shape::Constant) v += sh.a * (x[0] - a);
          else v += sh.a * (x[0] - a) + 0.5 * sh.b * (x[0] * x[0] - a * a);
        }
        return v;
      };
      o.unique_minimizer = o.constant_recovery = true;
      o.description = "equalized weighted slope";
      return o;
    }
    case IntegrandKind::DoubleWell: {
      std::vector<int> lad(ladder.begin(), ladder.end());
      if (lad.empty())
        for (int n = 1; n <= 1024; n *= 2) lad.push_back(n);
      const auto d = SampledDensity::sample([&](double s) { return f({a, 0.0}, s); }, envelope_radius, envelope_points);
      const auto q = q_infinity(d, lad);
      o.value = q(slope);
      o.u = [=](const Point& x) { return ua + slope * (x[0] - a); };
      o.unique_minimizer = false;
      o.constant_recovery = false;
      o.description = "affine weak limit, Q_inf f(mean slope)";
      return o;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Gamma-convergence experiments

struct GammaNormOptions {
  double value_threshold = 5e-3;
  double recovery_threshold = 5e-3;
  double l1_threshold = 5e-3;
  /// Relative discretization slack in the liminf check m_inf <= m_n (1 + slack) + threshold.
  double discretization_slack = 1e-6;
  bool report_only = false;
  MinimizeOptions minimize;
  std::vector<int> envelope_ladder;
};

namespace detail {

inline void require_gamma_sequence(const DirichletProblem& P, const ExponentSequence& seq) {
  if (seq.size() == 0) throw ArgumentError("empty exponent sequence");
  if (!seq.strictly_increasing()) throw HypothesisError("(p_n^-) must be strictly increasing");
  if (auto bad = seq.ratio_violation())
    throw HypothesisError("p_n^+/p_n^- <= beta fails at n = " + std::to_string(*bad + 1) + " (ratio " +
                          format_double(seq.p_plus[*bad] / seq.p_minus[*bad]) + ")");
  bool variable = false;
  for (const auto& phi : seq.entries)
    variable = variable || phi.kind() == PhiKind::VariableExponent || phi.kind() == PhiKind::VariableDoublePhase;
  if (variable && P.integrand.depends_on_u())
    throw HypothesisError("variable-exponent experiments need f = f(x, xi) independent of u");
}

inline GridFunction interpolate(const Grid& g, const std::function<double(const Point&)>& u) {
  return GridFunction::sample(g, u);
}

inline double l1_distance(const GridFunction& a, const GridFunction& b) {
  const Grid& g = a.grid();
  std::vector<double> diff(g.cell_count());
  for (std::size_t c = 0; c < diff.size(); ++c) {
    double s = 0.0;
    for (int k = 0; k < a.codomain_dim(); ++k) s += std::abs(a.cell_value(c, k) - b.cell_value(c, k));
    diff[c] = s;
  }
  return integrate(g, diff);
}

}  // namespace detail

struct GammaNormResult {
  ConvergenceReport report;
  std::vector<GridFunction> minimizers;
  std::optional<LimitOracle> oracle;
};

/// For each phi_n: minimize F_n, compare min value and minimizer with the
/// limit oracle, and evaluate F_n at the fixed oracle minimizer (constant
/// recovery sequence). Successive n are warm-started from the previous
/// minimizer.
inline GammaNormResult gamma_experiment_norm(const DirichletProblem& P, const ExponentSequence& seq,
                                             const GammaNormOptions& opt = {}) {
  if (seq.size() == 0) throw ArgumentError("empty exponent sequence");
  if (!opt.report_only) detail::require_gamma_sequence(P, seq);
  GammaNormResult out;
  out.oracle = limit_oracle(P, opt.minimize.envelope_radius, opt.minimize.envelope_points, opt.envelope_ladder);
  ConvergenceReport& r = out.report;
  r.kind = "gamma-norm";
  r.report_only = opt.report_only || !out.oracle;
  r.columns = {"n", "p_minus", "p_plus", "min_value", "oracle_value", "value_gap", "minimizer_L1_gap", "recovery_gap"};
  const double nan_fill = kInf;

  std::optional<GridFunction> oracle_u;
  if (out.oracle) oracle_u = detail::interpolate(P.grid, out.oracle->u);

  DirichletProblem warm = P;
  MinimizeOptions mopt = opt.minimize;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const auto E = EnergyFunctional::norm(seq.entries[n], P.integrand, P.grid);
    const MinimizeResult res = minimize(warm, E, mopt);
    warm.data = res.u;
    mopt.start = MinimizeOptions::Start::Given;
    out.minimizers.push_back(res.u);
    std::vector<double> row = {static_cast<double>(n + 1), seq.p_minus[n], seq.p_plus[n], res.value};
    if (out.oracle) {
      const double rec = energy(E, *oracle_u);
      row.push_back(out.oracle->value);
      row.push_back(std::abs(res.value - out.oracle->value));
      row.push_back(detail::l1_distance(res.u, *oracle_u));
      row.push_back(std::abs(rec - out.oracle->value));
    } else {
      row.insert(row.end(), {nan_fill, nan_fill, nan_fill, nan_fill});
    }
    r.rows.push_back(std::move(row));
  }
  if (out.oracle) r.meta["oracle"] = out.oracle->description;
  r.meta["cells"] = std::to_string(P.grid.cell_count());
  r.meta["integrand"] = kind_name(P.integrand.kind());

  if (r.report_only) return out;
  const auto& last = r.rows.back();
  const double m_inf = out.oracle->value;
  r.assert_that("min values converge to the limit value", last[5] <= opt.value_threshold,
                "gap " + format_double(last[5]) + " vs " + format_double(opt.value_threshold));
  const std::size_t tail = r.rows.size() - std::min(r.rows.size(), std::max<std::size_t>(2, r.rows.size() / 3));
  bool liminf = true;
  for (std::size_t n = tail; n < r.rows.size(); ++n)
    liminf = liminf && m_inf <= r.rows[n][3] * (1.0 + opt.discretization_slack) + opt.value_threshold;
  r.assert_that("liminf inequality m_inf <= m_n (1 + slack) + threshold on the ladder tail", liminf);
  if (out.oracle->constant_recovery) {
    r.assert_that("constant recovery sequence F_n(u_oracle) -> limit value", last[7] <= opt.recovery_threshold,
                  "gap " + format_double(last[7]) + " vs " + format_double(opt.recovery_threshold));
    bool shrinking = true;
    for (std::size_t n = tail + 1; n < r.rows.size(); ++n)
      shrinking = shrinking && r.rows[n][7] <= r.rows[n - 1][7] + 2.0 * 1e-9;
    r.assert_that("recovery gap nonincreasing on the ladder tail", shrinking);
  }
  if (out.oracle->unique_minimizer && seq.p_minus.front() >= 2.0)
    r.assert_that("minimizers converge in L1 to the oracle minimizer", last[6] <= opt.l1_threshold,
                  "L1 gap " + format_double(last[6]) + " vs " + format_double(opt.l1_threshold));
  return out;
}

struct GammaModularOptions {
  /// Margin separating the sub-level and super-level probes from 1.
  double delta = 0.05;
  /// E_n must end below this for probes with sup density <= 1 - delta.
  double small_threshold = 1e-3;
  /// E_n must end above this for probes with sup density >= 1 + delta.
  double large_threshold = 1e3;
  bool report_only = false;
  double envelope_radius = 4.0;
  std::size_t envelope_points = 801;
};

/// Sup over cells of the limit density Q_inf f(x, Du): f itself for convex
/// integrands, the lattice envelope for the double well.
inline double limit_density_sup(const Integrand& f, const GridFunction& u, double radius = 4.0,
                                std::size_t points = 801) {
  if (f.convex_in_gradient()) return sup_cellwise(density_field(f, u));
  if (f.kind() != IntegrandKind::DoubleWell) throw ArgumentError("no limit density for this integrand");
  std::vector<int> lad;
  for (int n = 1; n <= 1024; n *= 2) lad.push_back(n);
  const auto d = SampledDensity::sample([&](double s) { return f({0.0, 0.0}, s); }, radius, points);
  const auto q = q_infinity(d, lad);
  const auto du = gradient(u);
  double m = 0.0;
  for (double s : du.values) m = std::max(m, q(s));
  return m;
}

/// E_n at affine probe fields u = u(a) + s (x1 - a): fields whose limit
/// density stays below 1 must have E_n -> 0, fields above 1 must blow up.
/// Energies are tracked in the log domain.
inline ConvergenceReport gamma_experiment_modular(const DirichletProblem& P, const ExponentSequence& seq,
                                                  std::span<const double> probe_slopes,
                                                  const GammaModularOptions& opt = {}) {
  if (seq.size() == 0) throw ArgumentError("empty exponent sequence");
  if (!opt.report_only) detail::require_gamma_sequence(P, seq);
  if (probe_slopes.empty()) throw ArgumentError("modular experiment needs probe fields");
  ConvergenceReport r;
  r.kind = "gamma-modular";
  r.report_only = opt.report_only;
  r.columns = {"n", "p_minus", "p_plus", "probe", "slope", "sup_density", "log_energy"};
  const double x0 = P.grid.lower()[0];
  const double u0 = P.data.at(0);

  struct Probe {
    double slope;
    double sup;
    std::vector<double> log_e;
  };
  std::vector<Probe> probes;
  for (double s : probe_slopes) {
    GridFunction u = GridFunction::sample(P.grid, [&](const Point& x) { return u0 + s * (x[0] - x0); });
    Probe pr{s, limit_density_sup(P.integrand, u, opt.envelope_radius, opt.envelope_points), {}};
    for (std::size_t n = 0; n < seq.size(); ++n) {
      const auto E = EnergyFunctional::modular(seq.entries[n], P.integrand, P.grid);
      pr.log_e.push_back(log_energy(E, u));
    }
    probes.push_back(std::move(pr));
  }
  for (std::size_t n = 0; n < seq.size(); ++n)
    for (std::size_t k = 0; k < probes.size(); ++k)
      r.rows.push_back({static_cast<double>(n + 1), seq.p_minus[n], seq.p_plus[n], static_cast<double>(k),
                        probes[k].slope, probes[k].sup, probes[k].log_e[n]});
  if (r.report_only) return r;

  const std::size_t tail = seq.size() - std::min(seq.size(), std::max<std::size_t>(2, seq.size() / 3));
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const Probe& pr = probes[k];
    const std::string tag = "probe " + std::to_string(k) + " (slope " + format_double(pr.slope) + ")";
    bool dec = true;
    bool inc = true;
    for (std::size_t n = tail + 1; n < seq.size(); ++n) {
      dec = dec && pr.log_e[n] <= pr.log_e[n - 1];
      inc = inc && pr.log_e[n] >= pr.log_e[n - 1];
    }
    if (pr.sup <= 1.0 - opt.delta) {
      r.assert_that(tag + ": E_n -> 0", dec && pr.log_e.back() < std::log(opt.small_threshold),
                    "final log E_n " + format_double(pr.log_e.back()));
    } else if (pr.sup >= 1.0 + opt.delta) {
      r.assert_that(tag + ": E_n -> +inf", inc && pr.log_e.back() > std::log(opt.large_threshold),
                    "final log E_n " + format_double(pr.log_e.back()));
    } else if (pr.sup <= 1.0 + kRelTol) {
      r.assert_that(tag + ": boundary field, E_n bounded and nonincreasing", dec,
                    "final log E_n " + format_double(pr.log_e.back()));
    }
  }
  return r;
}

/// (H5): limsup phi_n^+(1) = 0 and liminf phi_n^-(1)^{1/p_n} >= 1, judged on
/// the ladder's final entry.
struct H5Report {
  bool pass = false;
  std::vector<double> phi_plus_1;
  std::vector<double> root_phi_minus_1;
};

inline H5Report check_h5(const ExponentSequence& seq, std::span<const Point> xs, double sup_threshold = 1e-2,
                         double root_threshold = 0.95) {
  H5Report r;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const auto anchor = check_anchor(seq.entries[n], 1.0, xs);
    r.phi_plus_1.push_back(anchor.phi_plus_1);
    r.root_phi_minus_1.push_back(std::pow(anchor.phi_minus_1, 1.0 / seq.p_minus[n]));
  }
  r.pass = !r.phi_plus_1.empty() && r.phi_plus_1.back() <= sup_threshold && r.root_phi_minus_1.back() >= root_threshold;
  return r;
}

}  // namespace orlicz

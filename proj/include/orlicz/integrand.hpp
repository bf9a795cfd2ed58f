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

// Preset integrands f(x, u, xi) >= 0 with growth certificates
//   f >= alpha |xi|^gamma          (lower growth)
//   f <= C (|xi|^gamma + 1)        (optional upper growth)
// and an eps-smoothed variant with xi-derivatives for descent.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orlicz/core.hpp"
#include "orlicz/domain.hpp"
#include "orlicz/envelope.hpp"
#include "orlicz/phi.hpp"

namespace orlicz {

enum class IntegrandKind {
  Norm,           // |xi|
  Weighted,       // w(x) |xi|
  Power,          // |xi|^gamma
  WeightedShift,  // w(x) |xi - b(x)|
  DoubleWell,     // min(|xi - 1| + kappa_r, |xi + 1| + kappa_l), scalar xi
  StateWeighted,  // (1 + |u|) |xi|, depends on u
  Tabulated,      // scalar xi, per-cell lattice table (e.g. Q_inf f)
};

struct SmoothEval {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

class Integrand {
 public:
  static Integrand norm() { return Integrand(IntegrandKind::Norm); }
  static Integrand weighted(Coefficient w) {
    Integrand f(IntegrandKind::Weighted);
    f.w_ = w;
    return f;
  }
  static Integrand power(double gamma) {
    if (!(gamma > 0)) throw ArgumentError("power integrand needs gamma > 0");
    Integrand f(IntegrandKind::Power);
    f.gamma_ = gamma;
    return f;
  }
  static Integrand weighted_shift(Coefficient w, Coefficient b) {
    Integrand f(IntegrandKind::WeightedShift);
    f.w_ = w;
    f.b_ = b;
    return f;
  }
  /// Symmetric wells at +-1 lifted by kappa; kappa_left != kappa_right tilts
  /// the wells.
  static Integrand double_well(double kappa, std::optional<double> kappa_left = std::nullopt) {
    if (!(kappa > 0)) throw ArgumentError("double well needs kappa > 0");
    Integrand f(IntegrandKind::DoubleWell);
    f.kappa_r_ = kappa;
    f.kappa_l_ = kappa_left.value_or(kappa);
    if (!(f.kappa_l_ > 0)) throw ArgumentError("double well needs kappa > 0");
    return f;
  }
  static Integrand state_weighted() { return Integrand(IntegrandKind::StateWeighted); }

  /// Scalar-gradient density given by lattice tables. `tables` holds one
  /// entry (x-independent) or one per cell of `grid`.
  static Integrand tabulated(Grid grid, std::vector<EnvelopeResult> tables, double alpha, double gamma,
                             std::optional<double> upper_c) {
    if (tables.empty()) throw ArgumentError("tabulated integrand needs at least one table");
    if (tables.size() != 1 && tables.size() != grid.cell_count())
      throw ArgumentError("tabulated integrand needs one table or one per cell");
    Integrand f(IntegrandKind::Tabulated);
    f.table_grid_ = std::move(grid);
    f.tables_ = std::make_shared<const std::vector<EnvelopeResult>>(std::move(tables));
    f.table_alpha_ = alpha;
    f.gamma_ = gamma;
    f.table_upper_ = upper_c;
    return f;
  }

  [[nodiscard]] IntegrandKind kind() const { return kind_; }
  [[nodiscard]] bool depends_on_u() const { return kind_ == IntegrandKind::StateWeighted; }
  [[nodiscard]] bool scalar_only() const {
    return kind_ == IntegrandKind::DoubleWell || kind_ == IntegrandKind::Tabulated;
  }
  [[nodiscard]] bool x_dependent() const {
    return ((kind_ == IntegrandKind::Weighted || kind_ == IntegrandKind::WeightedShift) &&
            (w_.shape != Coefficient::Shape::Constant || b_.shape != Coefficient::Shape::Constant)) ||
           (kind_ == IntegrandKind::Tabulated && tables_->size() > 1);
  }
  /// True when xi -> f(x, u, xi) has kinks that need smoothing for descent.
  [[nodiscard]] bool has_kinks() const { return !(kind_ == IntegrandKind::Power && gamma_ >= 2.0); }
  /// Convex in xi for every x (as opposed to merely level convex or worse).
  [[nodiscard]] bool convex_in_gradient() const {
    switch (kind_) {
      case IntegrandKind::Power: return gamma_ >= 1.0;
      case IntegrandKind::DoubleWell:
      case IntegrandKind::Tabulated: return false;
      default: return true;
    }
  }

  [[nodiscard]] const Coefficient& weight() const { return w_; }
  [[nodiscard]] const Coefficient& shift() const { return b_; }
  [[nodiscard]] double gamma_param() const { return gamma_; }
  [[nodiscard]] double kappa_right() const { return kappa_r_; }
  [[nodiscard]] double kappa_left() const { return kappa_l_; }

  /// Growth certificate (alpha, gamma, C) over the sample points. alpha is 0
  /// when no positive lower bound of the form alpha |xi|^gamma exists.
  struct Growth {
    double alpha = 0.0;
    double gamma = 1.0;
    std::optional<double> upper_c;
  };

  [[nodiscard]] Growth growth(std::span<const Point> xs) const {
    double wmin = kInf;
    double wmax = 0.0;
    double bmax = 0.0;
    for (const Point& x : xs) {
      wmin = std::min(wmin, w_(x));
      wmax = std::max(wmax, w_(x));
      bmax = std::max(bmax, std::abs(b_(x)));
    }
    switch (kind_) {
      case IntegrandKind::Norm: return {1.0, 1.0, 1.0};
      case IntegrandKind::Weighted: return {std::max(0.0, wmin), 1.0, wmax};
      case IntegrandKind::Power: return {1.0, gamma_, 1.0};
      case IntegrandKind::WeightedShift:
        // vanishes at xi = b, so only b = 0 admits alpha > 0
        return {bmax == 0.0 ? std::max(0.0, wmin) : 0.0, 1.0, wmax * std::max(1.0, bmax)};
      case IntegrandKind::DoubleWell: {
        const double k = std::min(kappa_l_, kappa_r_);
        return {std::min(k, 1.0), 1.0, 1.0 + std::max(kappa_l_, kappa_r_)};
      }
      case IntegrandKind::StateWeighted: return {1.0, 1.0, std::nullopt};
      case IntegrandKind::Tabulated: return {table_alpha_, gamma_, table_upper_};
    }
    return {};
  }

  /// Exact (unsmoothed) value.
  [[nodiscard]] double operator()(const Point& x, std::span<const double> u, std::span<const double> xi) const {
    switch (kind_) {
      case IntegrandKind::Norm: return euclid(xi, 0.0);
      case IntegrandKind::Weighted: return w_(x) * euclid(xi, 0.0);
      case IntegrandKind::Power: return std::pow(euclid(xi, 0.0), gamma_);
      case IntegrandKind::WeightedShift: return w_(x) * euclid(xi, b_(x));
      case IntegrandKind::DoubleWell: {
        require_scalar(xi);
        return std::min(std::abs(xi[0] - 1.0) + kappa_r_, std::abs(xi[0] + 1.0) + kappa_l_);
      }
      case IntegrandKind::StateWeighted: {
        double un = 0.0;
        for (double v : u) un += v * v;
        return (1.0 + std::sqrt(un)) * euclid(xi, 0.0);
      }
      case IntegrandKind::Tabulated: {
        require_scalar(xi);
        return table_for(x)(xi[0]);
      }
    }
    return 0.0;
  }

  /// Scalar convenience overload for 1D scalar problems.
  [[nodiscard]] double operator()(const Point& x, double xi) const {
    const double u = 0.0;
    return (*this)(x, std::span<const double>(&u, 1), std::span<const double>(&xi, 1));
  }

  /// eps-smoothed value with gradient and Hessian in xi: every |v| becomes
  /// sqrt(|v|^2 + eps^2) and min(a, b) becomes (a + b - sqrt((a-b)^2 + eps^2))/2.
  [[nodiscard]] SmoothEval smooth(const Point& x, std::span<const double> u, std::span<const double> xi,
                                  double eps) const {
    const int n = static_cast<int>(xi.size());
    SmoothEval r;
    r.grad = Eigen::VectorXd::Zero(n);
    r.hess = Eigen::MatrixXd::Zero(n, n);
    switch (kind_) {
      case IntegrandKind::Norm: smooth_norm(xi, 0.0, eps, 1.0, r); break;
      case IntegrandKind::Weighted: smooth_norm(xi, 0.0, eps, w_(x), r); break;
      case IntegrandKind::WeightedShift: smooth_norm(xi, b_(x), eps, w_(x), r); break;
      case IntegrandKind::StateWeighted: {
        double un = 0.0;
        for (double v : u) un += v * v;
        smooth_norm(xi, 0.0, eps, 1.0 + std::sqrt(un), r);
        break;
      }
      case IntegrandKind::Power: {
        SmoothEval s;
        s.grad = Eigen::VectorXd::Zero(n);
        s.hess = Eigen::MatrixXd::Zero(n, n);
        // gamma >= 2 is smooth as is; smoothing otherwise.
        smooth_norm(xi, 0.0, gamma_ >= 2.0 ? 0.0 : eps, 1.0, s);
        if (s.value == 0.0) {
          r.value = 0.0;
          if (gamma_ == 2.0) r.hess = 2.0 * Eigen::MatrixXd::Identity(n, n);
          break;
        }
        const double g = gamma_;
        r.value = std::pow(s.value, g);
        r.grad = g * std::pow(s.value, g - 1.0) * s.grad;
        r.hess = g * std::pow(s.value, g - 1.0) * s.hess + g * (g - 1.0) * std::pow(s.value, g - 2.0) * s.grad * s.grad.transpose();
        break;
      }
      case IntegrandKind::DoubleWell: {
        require_scalar(xi);
        const double t = xi[0];
        const double ra = std::sqrt((t - 1.0) * (t - 1.0) + eps * eps);
        const double rb = std::sqrt((t + 1.0) * (t + 1.0) + eps * eps);
        const double a = ra + kappa_r_;
        const double b = rb + kappa_l_;
        const double da = (t - 1.0) / ra;
        const double db = (t + 1.0) / rb;
        const double dda = eps * eps / (ra * ra * ra);
        const double ddb = eps * eps / (rb * rb * rb);
        const double D = a - b;
        const double dD = da - db;
        const double ddD = dda - ddb;
        const double r2 = std::sqrt(D * D + eps * eps);
        r.value = 0.5 * (a + b - r2);
        r.grad(0) = 0.5 * (da + db - D * dD / r2);
        r.hess(0, 0) = 0.5 * (dda + ddb - (dD * dD * eps * eps / (r2 * r2 * r2) + D * ddD / r2));
        break;
      }
      case IntegrandKind::Tabulated:
        throw ArgumentError("tabulated integrands are not differentiable; minimize the raw density instead");
    }
    return r;
  }

 private:
  explicit Integrand(IntegrandKind k) : kind_(k) {}

  static void require_scalar(std::span<const double> xi) {
    if (xi.size() != 1) throw ArgumentError("this integrand is defined for scalar gradients only");
  }

  static double euclid(std::span<const double> xi, double shift) {
    double s = 0.0;
    for (double v : xi) s += (v - shift) * (v - shift);
    return std::sqrt(s);
  }

  static void smooth_norm(std::span<const double> xi, double shift, double eps, double scale, SmoothEval& r) {
    const int n = static_cast<int>(xi.size());
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = xi[i] - shift;
    const double s = std::sqrt(v.squaredNorm() + eps * eps);
    r.value = scale * s;
    if (s == 0.0) return;
    const Eigen::VectorXd g = v / s;
    r.grad = scale * g;
    r.hess = scale * (Eigen::MatrixXd::Identity(n, n) - g * g.transpose()) / s;
  }

  const EnvelopeResult& table_for(const Point& x) const {
    if (tables_->size() == 1) return tables_->front();
    const double h = table_grid_.spacing(0);
    int i = static_cast<int>(std::floor((x[0] - table_grid_.lower()[0]) / h));
    i = std::clamp(i, 0, table_grid_.cells(0) - 1);
    int j = 0;
    if (table_grid_.dim() == 2) {
      j = static_cast<int>(std::floor((x[1] - table_grid_.lower()[1]) / table_grid_.spacing(1)));
      j = std::clamp(j, 0, table_grid_.cells(1) - 1);
    }
    return (*tables_)[table_grid_.cell_index(i, j)];
  }

  IntegrandKind kind_;
  Coefficient w_ = Coefficient::constant(1.0);
  Coefficient b_ = Coefficient::constant(0.0);
  double gamma_ = 1.0;
  double kappa_r_ = 0.0;
  double kappa_l_ = 0.0;
  Grid table_grid_;
  std::shared_ptr<const std::vector<EnvelopeResult>> tables_;
  double table_alpha_ = 0.0;
  std::optional<double> table_upper_;
};

inline const char* kind_name(IntegrandKind k) {
  switch (k) {
    case IntegrandKind::Norm: return "norm";
    case IntegrandKind::Weighted: return "weighted";
    case IntegrandKind::Power: return "power";
    case IntegrandKind::WeightedShift: return "weighted_shift";
    case IntegrandKind::DoubleWell: return "double_well";
    case IntegrandKind::StateWeighted: return "state_weighted";
    case IntegrandKind::Tabulated: return "tabulated";
  }
  return "?";
}

struct GrowthCheck {
  bool lower_pass = true;
  bool upper_pass = true;
  double worst_lower = 0.0;  // max of alpha|xi|^gamma - f
  double worst_upper = 0.0;  // max of f - C(|xi|^gamma + 1)
};

/// Sampled growth certificate check on a seeded random lattice of
/// (x, u, xi) triples.
inline GrowthCheck check_growth(const Integrand& f, const Integrand::Growth& g, std::span<const Point> xs, int grad_dim,
                                std::uint64_t seed = 7, int samples_per_point = 64, double radius = 10.0) {
  if (xs.empty()) throw ArgumentError("empty growth sample set");
  GrowthCheck r;
  Rng rng(seed);
  std::vector<double> xi(grad_dim);
  std::vector<double> u(1);
  for (const Point& x : xs) {
    for (int s = 0; s < samples_per_point; ++s) {
      double norm2 = 0.0;
      for (auto& v : xi) {
        v = rng.uniform(-radius, radius);
        norm2 += v * v;
      }
      u[0] = rng.uniform(-radius, radius);
      const double val = f(x, u, xi);
      const double pw = std::pow(std::sqrt(norm2), g.gamma);
      const double low = g.alpha * pw - val;
      r.worst_lower = std::max(r.worst_lower, low);
      if (low > kRelTol * (1.0 + val) || !(g.alpha > 0)) r.lower_pass = false;
      if (g.upper_c) {
        const double up = val - *g.upper_c * (pw + 1.0);
        r.worst_upper = std::max(r.worst_upper, up);
        if (up > kRelTol * (1.0 + val)) r.upper_pass = false;
      }
    }
  }
  return r;
}

}  // namespace orlicz

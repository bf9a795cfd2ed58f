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

// Catalog of generalized weak Phi-functions phi(x, t) and samplers for the
// structural hypotheses used by the convergence theorems:
//   (aInc)_p   phi(x, lambda t) <= L lambda^p phi(x, t),  lambda <= 1
//   anchor     1/c <= phi(x, 1) <= c
//   (A0)       phi(x, beta) <= 1 <= phi(x, 1/beta)
// Essential bounds over x are sampled on cell centers ("sampled essential
// bounds").

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/domain.hpp"

namespace orlicz {

/// Symbolic coefficient preset: constant a, affine a + b*x1, or
/// sinusoidal a + b*sin(2*pi*x1).
struct Coefficient {
  enum class Shape { Constant, Affine, Sinusoidal };

  Shape shape = Shape::Constant;
  double a = 0.0;
  double b = 0.0;
  /// When set the coefficient evaluates to the Hoelder conjugate v/(v-1) of
  /// the base value v.
  bool conjugate = false;

  static Coefficient constant(double a) { return {Shape::Constant, a, 0.0}; }
  static Coefficient affine(double a, double b) { return {Shape::Affine, a, b}; }
  static Coefficient sinusoidal(double a, double b) { return {Shape::Sinusoidal, a, b}; }

  [[nodiscard]] double operator()(const Point& x) const {
    double v = a;
    switch (shape) {
      case Shape::Constant: break;
      case Shape::Affine: v = a + b * x[0]; break;
      case Shape::Sinusoidal: v = a + b * std::sin(2.0 * std::numbers::pi * x[0]); break;
    }
    if (!conjugate) return v;
    if (!(v > 1.0)) throw DomainError("conjugate exponent needs base exponent > 1");
    return v / (v - 1.0);
  }

  [[nodiscard]] Coefficient scaled(double s) const {
    if (conjugate) throw ArgumentError("cannot rescale a conjugate exponent");
    return {shape, a * s, b * s};
  }
  [[nodiscard]] Coefficient conjugated() const {
    Coefficient c = *this;
    c.conjugate = !conjugate;
    return c;
  }

  [[nodiscard]] static const char* shape_name(Shape s) {
    switch (s) {
      case Shape::Constant: return "constant";
      case Shape::Affine: return "affine";
      case Shape::Sinusoidal: return "sinusoidal";
    }
    return "?";
  }

  friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

enum class PhiKind { ConstantPower, VariableExponent, DoublePhase, VariableDoublePhase, Orlicz, InfinityIndicator };

/// x-independent Orlicz presets. ScaledPower is (t/s)^p. PlateauPower is t^p
/// on [0,1], flat 1 on [1,b] and (t/b)^p beyond; its best (aInc)_p constant
/// is b^p.
enum class OrliczShape { ScaledPower, PlateauPower };

/// phi(x, t) = sum_k exp(log_coef_k) * t^exponent_k at a fixed x. Every
/// catalog kind except the plateau and the indicator has this form.
struct Monomials {
  struct Term {
    double coef;
    double log_coef;
    double exponent;

    [[nodiscard]] double value(double t) const {
      if (coef == 0.0) return 0.0;
      const double v = std::pow(t, exponent);
      if (v == kInf && coef < 1.0) return std::exp(log_coef + exponent * std::log(t));
      if (v == 0.0 && coef > 1.0) return std::exp(log_coef + exponent * std::log(t));
      return coef * v;
    }
  };
  std::array<Term, 2> terms{};
  int size = 0;

  /// log phi(t) for t > 0.
  [[nodiscard]] double log_value(double t) const {
    if (t == 0.0) return -kInf;
    const double lt = std::log(t);
    double acc = -kInf;
    for (int k = 0; k < size; ++k) acc = log_add_exp(acc, terms[k].log_coef + terms[k].exponent * lt);
    return acc;
  }

  /// phi'(t)/phi(t) and phi''(t)/phi(t) for t > 0.
  [[nodiscard]] std::pair<double, double> log_derivative_ratios(double t) const {
    const double lt = std::log(t);
    const double total = log_value(t);
    double d1 = 0.0;
    double d2 = 0.0;
    for (int k = 0; k < size; ++k) {
      const double w = std::exp(terms[k].log_coef + terms[k].exponent * lt - total);
      const double e = terms[k].exponent;
      d1 += w * e;
      d2 += w * e * (e - 1.0);
    }
    return {d1 / t, d2 / (t * t)};
  }
};

class PhiFunction {
 public:
  static PhiFunction constant_power(double p, bool inverse_exponent_weight = false) {
    if (!(p >= 1.0)) throw ArgumentError("power exponent must be >= 1");
    PhiFunction f(PhiKind::ConstantPower);
    f.p_ = Coefficient::constant(p);
    f.inverse_weight_ = inverse_exponent_weight;
    return f;
  }
  /// w(x) t^p with w >= 0.
  static PhiFunction weighted_power(double p, Coefficient w) {
    PhiFunction f = constant_power(p);
    f.weight_ = w;
    return f;
  }
  /// t^{p(x)}, optionally divided by p(x) (the weighted modular of variable
  /// exponent energies).
  static PhiFunction variable_exponent(Coefficient p, bool inverse_exponent_weight = false) {
    PhiFunction f(PhiKind::VariableExponent);
    f.p_ = p;
    f.inverse_weight_ = inverse_exponent_weight;
    return f;
  }
  /// t^p + a(x) t^q with 1 <= p <= q and a >= 0.
  static PhiFunction double_phase(double p, double q, Coefficient a) {
    if (!(p >= 1.0) || !(q >= p)) throw ArgumentError("double phase needs 1 <= p <= q");
    PhiFunction f(PhiKind::DoublePhase);
    f.p_ = Coefficient::constant(p);
    f.q_ = Coefficient::constant(q);
    f.a_ = a;
    return f;
  }
  static PhiFunction variable_double_phase(Coefficient p, Coefficient q, Coefficient a) {
    PhiFunction f(PhiKind::VariableDoublePhase);
    f.p_ = p;
    f.q_ = q;
    f.a_ = a;
    return f;
  }
  static PhiFunction scaled_power(double p, double scale) {
    if (!(p >= 1.0) || !(scale > 0.0)) throw ArgumentError("scaled power needs p >= 1 and scale > 0");
    PhiFunction f(PhiKind::Orlicz);
    f.orlicz_ = OrliczShape::ScaledPower;
    f.p_ = Coefficient::constant(p);
    f.shape_param_ = scale;
    return f;
  }
  static PhiFunction plateau_power(double p, double plateau_end) {
    if (!(p >= 1.0) || !(plateau_end >= 1.0)) throw ArgumentError("plateau power needs p >= 1 and plateau end >= 1");
    PhiFunction f(PhiKind::Orlicz);
    f.orlicz_ = OrliczShape::PlateauPower;
    f.p_ = Coefficient::constant(p);
    f.shape_param_ = plateau_end;
    return f;
  }
  /// phi_inf(t) = 0 for t <= 1, +inf for t > 1.
  static PhiFunction infinity_indicator() { return PhiFunction(PhiKind::InfinityIndicator); }

  [[nodiscard]] PhiKind kind() const { return kind_; }
  [[nodiscard]] bool is_indicator() const { return kind_ == PhiKind::InfinityIndicator; }
  [[nodiscard]] OrliczShape orlicz_shape() const { return orlicz_; }
  [[nodiscard]] const Coefficient& p() const { return p_; }
  [[nodiscard]] const Coefficient& q() const { return q_; }
  [[nodiscard]] const Coefficient& a() const { return a_; }
  [[nodiscard]] double shape_param() const { return shape_param_; }
  [[nodiscard]] bool inverse_exponent_weight() const { return inverse_weight_; }
  [[nodiscard]] const std::optional<Coefficient>& weight() const { return weight_; }
  [[nodiscard]] bool has_monomials() const {
    return !(kind_ == PhiKind::InfinityIndicator ||
             (kind_ == PhiKind::Orlicz && orlicz_ == OrliczShape::PlateauPower));
  }

  /// Same shape with every exponent multiplied by s (ladder construction).
  [[nodiscard]] PhiFunction with_exponent_scale(double s) const {
    if (!(s > 0)) throw ArgumentError("exponent scale must be positive");
    PhiFunction f = *this;
    f.p_ = p_.scaled(s);
    f.q_ = q_.scaled(s);
    return f;
  }

  [[nodiscard]] Monomials monomials(const Point& x) const {
    Monomials m;
    switch (kind_) {
      case PhiKind::ConstantPower:
      case PhiKind::VariableExponent: {
        const double px = p_(x);
        if (!(px >= 1.0)) throw DomainError("exponent p(x) must be >= 1");
        m.terms[0] = inverse_weight_ ? Monomials::Term{1.0 / px, -std::log(px), px} : Monomials::Term{1.0, 0.0, px};
        if (weight_) {
          const double wx = (*weight_)(x);
          if (!(wx >= 0.0)) throw DomainError("power weight w(x) must be nonnegative");
          m.terms[0].coef *= wx;
          m.terms[0].log_coef += wx > 0 ? std::log(wx) : -kInf;
        }
        m.size = 1;
        break;
      }
      case PhiKind::DoublePhase:
      case PhiKind::VariableDoublePhase: {
        const double ax = a_(x);
        if (ax < 0.0) throw DomainError("double phase weight a(x) must be nonnegative");
        m.terms[0] = {1.0, 0.0, p_(x)};
        m.terms[1] = {ax, ax > 0 ? std::log(ax) : -kInf, q_(x)};
        m.size = 2;
        break;
      }
      case PhiKind::Orlicz:
        if (orlicz_ == OrliczShape::ScaledPower) {
          const double px = p_(x);
          m.terms[0] = {std::pow(shape_param_, -px), -px * std::log(shape_param_), px};
          m.size = 1;
          break;
        }
        [[fallthrough]];
      case PhiKind::InfinityIndicator:
        throw ArgumentError("phi kind has no monomial form");
    }
    return m;
  }

  /// phi(x, t). +inf is returned exactly for the indicator; NaN never escapes.
  [[nodiscard]] double operator()(const Point& x, double t) const {
    check_argument(t);
    if (kind_ == PhiKind::InfinityIndicator) return t <= 1.0 ? 0.0 : kInf;
    if (t == 0.0) return 0.0;
    if (kind_ == PhiKind::Orlicz && orlicz_ == OrliczShape::PlateauPower) {
      const double px = p_(x);
      if (t <= 1.0) return std::pow(t, px);
      if (t <= shape_param_) return 1.0;
      return std::pow(t / shape_param_, px);
    }
    const Monomials m = monomials(x);
    double s = 0.0;
    for (int k = 0; k < m.size; ++k) s += m.terms[k].value(t);
    return require_not_nan(s, "phi evaluation");
  }

  /// log phi(x, t); -inf where phi vanishes, +inf where it is infinite.
  [[nodiscard]] double log_value(const Point& x, double t) const {
    check_argument(t);
    if (kind_ == PhiKind::InfinityIndicator) return t <= 1.0 ? -kInf : kInf;
    if (t == 0.0) return -kInf;
    if (kind_ == PhiKind::Orlicz && orlicz_ == OrliczShape::PlateauPower) {
      const double px = p_(x);
      if (t <= 1.0) return px * std::log(t);
      if (t <= shape_param_) return 0.0;
      return px * std::log(t / shape_param_);
    }
    return require_not_nan(monomials(x).log_value(t), "phi log evaluation");
  }

  friend bool operator==(const PhiFunction&, const PhiFunction&) = default;

 private:
  explicit PhiFunction(PhiKind k) : kind_(k) {}

  static void check_argument(double t) {
    if (!std::isfinite(t)) throw DomainError("phi argument must be finite");
    if (t < 0.0) throw DomainError("phi argument must be nonnegative");
  }

  PhiKind kind_;
  OrliczShape orlicz_ = OrliczShape::ScaledPower;
  Coefficient p_ = Coefficient::constant(1.0);
  Coefficient q_ = Coefficient::constant(1.0);
  Coefficient a_ = Coefficient::constant(0.0);
  double shape_param_ = 1.0;
  bool inverse_weight_ = false;
  std::optional<Coefficient> weight_;
};

inline const char* kind_name(PhiKind k) {
  switch (k) {
    case PhiKind::ConstantPower: return "constant_power";
    case PhiKind::VariableExponent: return "variable_exponent";
    case PhiKind::DoublePhase: return "double_phase";
    case PhiKind::VariableDoublePhase: return "variable_double_phase";
    case PhiKind::Orlicz: return "orlicz";
    case PhiKind::InfinityIndicator: return "infinity_indicator";
  }
  return "?";
}

inline std::string describe(const Coefficient& c) {
  std::string s = c.shape == Coefficient::Shape::Constant ? format_double(c.a)
                  : std::string(Coefficient::shape_name(c.shape)) + "(" + format_double(c.a) + ";" +
                        format_double(c.b) + ")";
  return c.conjugate ? "conj " + s : s;
}

/// Short human-readable label, e.g. "double_phase(p=2 q=3 a=affine(0;1))".
inline std::string describe(const PhiFunction& phi) {
  std::string s = kind_name(phi.kind());
  switch (phi.kind()) {
    case PhiKind::ConstantPower:
    case PhiKind::VariableExponent:
      s += "(p=" + describe(phi.p());
      if (phi.weight()) s += " w=" + describe(*phi.weight());
      if (phi.inverse_exponent_weight()) s += " /p";
      return s + ")";
    case PhiKind::DoublePhase:
    case PhiKind::VariableDoublePhase:
      return s + "(p=" + describe(phi.p()) + " q=" + describe(phi.q()) + " a=" + describe(phi.a()) + ")";
    case PhiKind::Orlicz:
      return std::string(phi.orlicz_shape() == OrliczShape::ScaledPower ? "scaled_power" : "plateau_power") +
             "(p=" + describe(phi.p()) + " s=" + format_double(phi.shape_param()) + ")";
    case PhiKind::InfinityIndicator: return s;
  }
  return s;
}

/// Lower and upper growth exponents sampled over the points.
struct ExponentBounds {
  double minus = kInf;
  double plus = kInf;
};

inline ExponentBounds exponent_bounds(const PhiFunction& phi, std::span<const Point> xs) {
  if (phi.is_indicator()) return {};
  const bool two_phase = phi.kind() == PhiKind::DoublePhase || phi.kind() == PhiKind::VariableDoublePhase;
  ExponentBounds b{kInf, -kInf};
  for (const Point& x : xs) {
    b.minus = std::min(b.minus, phi.p()(x));
    b.plus = std::max(b.plus, two_phase ? phi.q()(x) : phi.p()(x));
  }
  return b;
}

/// Structural parameters a catalog entry is known to satisfy on the given
/// sample points: (aInc)_{rate} with constant L, and the anchor bound c.
struct PhiClaims {
  double aInc_rate = 1.0;
  double aInc_constant = 1.0;
  double anchor_c = 1.0;
};

inline PhiClaims nominal_claims(const PhiFunction& phi, std::span<const Point> xs) {
  PhiClaims c;
  if (phi.is_indicator()) {
    c.aInc_rate = 1.0;
    return c;
  }
  const ExponentBounds eb = exponent_bounds(phi, xs);
  c.aInc_rate = eb.minus;
  double lo = kInf;
  double hi = 0.0;
  for (const Point& x : xs) {
    const double v = phi(x, 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  c.anchor_c = std::max({1.0, hi, lo > 0 ? 1.0 / lo : kInf});
  if (phi.kind() == PhiKind::Orlicz && phi.orlicz_shape() == OrliczShape::PlateauPower)
    c.aInc_constant = std::pow(phi.shape_param(), eb.minus);
  return c;
}

// ---------------------------------------------------------------------------
// Hypothesis samplers

struct SamplePlan {
  std::vector<Point> xs;
  std::vector<double> ts;
  std::vector<double> lambdas;

  /// Cell centers (strided down to at most max_points), lambda in {2^-k,
  /// k=0..20}, t log-spaced on [1e-6, 1e6] with 4 points per decade.
  static SamplePlan standard(const Grid& grid, std::size_t max_points = 256) {
    SamplePlan s;
    const std::size_t n = grid.cell_count();
    const std::size_t stride = std::max<std::size_t>(1, (n + max_points - 1) / max_points);
    for (std::size_t c = 0; c < n; c += stride) s.xs.push_back(grid.cell_center(c));
    for (int k = 0; k <= 20; ++k) s.lambdas.push_back(std::ldexp(1.0, -k));
    for (int k = -24; k <= 24; ++k) s.ts.push_back(std::pow(10.0, k / 4.0));
    return s;
  }
};

struct AIncReport {
  bool pass = true;
  /// max over samples of (phi(x, lambda t) - L lambda^p phi(x, t)) / (1 + |rhs|)
  double worst_violation = -kInf;
  Point witness_x{};
  double witness_t = 0.0;
  double witness_lambda = 1.0;
  /// Smallest L that would make the sampled inequality hold.
  double estimated_constant = 0.0;
};

inline AIncReport check_aInc(const PhiFunction& phi, double p, double L, const SamplePlan& plan) {
  if (!(p >= 1.0)) throw ArgumentError("(aInc) rate must be >= 1");
  if (!(L >= 1.0)) throw ArgumentError("(aInc) constant must be >= 1");
  if (plan.xs.empty() || plan.ts.empty() || plan.lambdas.empty()) throw ArgumentError("empty (aInc) sample plan");
  AIncReport r;
  for (const Point& x : plan.xs) {
    for (double t : plan.ts) {
      const double phi_t = phi(x, t);
      const double log_phi_t = phi.log_value(x, t);
      for (double lam : plan.lambdas) {
        if (!(lam > 0.0 && lam <= 1.0)) throw ArgumentError("(aInc) lambda must lie in (0, 1]");
        const double lhs = phi(x, lam * t);
        double rhs = kInf;
        if (phi_t == 0.0) rhs = 0.0;
        else if (phi_t < kInf) rhs = std::exp(std::log(L) + p * std::log(lam) + log_phi_t);
        double violation;
        if (rhs == kInf) violation = -kInf;
        else if (lhs == kInf) violation = kInf;
        else violation = (lhs - rhs) / (1.0 + std::abs(rhs));
        if (violation > r.worst_violation) {
          r.worst_violation = violation;
          r.witness_x = x;
          r.witness_t = t;
          r.witness_lambda = lam;
        }
        if (std::isfinite(log_phi_t) && log_phi_t > -kInf) {
          const double ratio = phi.log_value(x, lam * t) - p * std::log(lam) - log_phi_t;
          r.estimated_constant = std::max(r.estimated_constant, std::exp(ratio));
        }
      }
    }
  }
  r.pass = r.worst_violation <= kRelTol;
  return r;
}

struct AnchorReport {
  bool supported = true;
  bool pass = false;
  double phi_minus_1 = kInf;
  double phi_plus_1 = 0.0;
};

/// Sampled essential bounds of phi(., 1) against [1/c, c].
inline AnchorReport check_anchor(const PhiFunction& phi, double c, std::span<const Point> xs) {
  if (!(c >= 1.0)) throw ArgumentError("anchor constant must be >= 1");
  if (xs.empty()) throw ArgumentError("empty anchor sample set");
  AnchorReport r;
  for (const Point& x : xs) {
    const double v = phi(x, 1.0);
    r.phi_minus_1 = std::min(r.phi_minus_1, v);
    r.phi_plus_1 = std::max(r.phi_plus_1, v);
  }
  if (phi.is_indicator()) {
    // phi_inf(x, 1) = 0 cannot satisfy a two-sided anchor.
    r.supported = false;
    r.pass = false;
    return r;
  }
  r.pass = r.phi_minus_1 * c >= 1.0 - kRelTol && r.phi_plus_1 <= c * (1.0 + kRelTol);
  return r;
}

struct A0Report {
  bool pass = false;
  double max_phi_beta = 0.0;
  double min_phi_inv_beta = kInf;
};

/// (A0): phi(x, beta) <= 1 <= phi(x, 1/beta) on every sample point.
inline A0Report check_A0(const PhiFunction& phi, double beta, std::span<const Point> xs) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ArgumentError("(A0) beta must lie in (0, 1]");
  A0Report r;
  for (const Point& x : xs) {
    r.max_phi_beta = std::max(r.max_phi_beta, phi(x, beta));
    r.min_phi_inv_beta = std::min(r.min_phi_inv_beta, phi(x, 1.0 / beta));
  }
  r.pass = r.max_phi_beta <= 1.0 + kRelTol && r.min_phi_inv_beta >= 1.0 - kRelTol;
  return r;
}

struct PhiWReport {
  bool pass = true;
  std::string failure;
};

/// Weak Phi-function sanity: phi(x,0) = 0, nondecreasing in t on the plan's
/// t lattice, and growth at the largest sampled t.
inline PhiWReport check_phi_w(const PhiFunction& phi, const SamplePlan& plan) {
  PhiWReport r;
  std::vector<double> ts = plan.ts;
  std::sort(ts.begin(), ts.end());
  for (const Point& x : plan.xs) {
    if (phi(x, 0.0) != 0.0) return {false, "phi(x,0) != 0"};
    double prev = 0.0;
    for (double t : ts) {
      const double v = phi(x, t);
      if (v < prev) return {false, "phi(x,.) decreases near t=" + format_double(t)};
      prev = v;
    }
    if (!(phi(x, ts.back()) > phi(x, 1.0))) return {false, "phi(x,.) does not grow at the largest sampled t"};
  }
  return r;
}

// ---------------------------------------------------------------------------

/// phi_1, ..., phi_K with sampled exponent bounds per entry.
struct ExponentSequence {
  std::vector<PhiFunction> entries;
  std::vector<double> p_minus;
  std::vector<double> p_plus;
  std::optional<double> ratio_bound;

  static ExponentSequence build(std::vector<PhiFunction> entries, std::span<const Point> xs,
                                std::optional<double> ratio_bound = std::nullopt) {
    ExponentSequence s;
    s.entries = std::move(entries);
    s.ratio_bound = ratio_bound;
    for (const auto& phi : s.entries) {
      const ExponentBounds b = exponent_bounds(phi, xs);
      s.p_minus.push_back(b.minus);
      s.p_plus.push_back(b.plus);
    }
    return s;
  }

  /// Geometric ladder: template exponents scaled by start * factor^k.
  static ExponentSequence ladder(const PhiFunction& base, double start, double factor, int count,
                                 std::span<const Point> xs, std::optional<double> ratio_bound = std::nullopt) {
    if (count < 1) throw ArgumentError("ladder needs at least one entry");
    if (!(start > 0) || !(factor > 1)) throw ArgumentError("ladder needs start > 0 and factor > 1");
    std::vector<PhiFunction> e;
    double m = start;
    for (int k = 0; k < count; ++k, m *= factor) e.push_back(base.with_exponent_scale(m));
    return build(std::move(e), xs, ratio_bound);
  }

  [[nodiscard]] std::size_t size() const { return entries.size(); }

  [[nodiscard]] bool strictly_increasing() const {
    for (std::size_t n = 1; n < p_minus.size(); ++n)
      if (!(p_minus[n] > p_minus[n - 1])) return false;
    return true;
  }

  /// Index of the first entry with p_plus / p_minus above the bound, if any.
  [[nodiscard]] std::optional<std::size_t> ratio_violation() const {
    if (!ratio_bound) return std::nullopt;
    for (std::size_t n = 0; n < size(); ++n)
      if (p_plus[n] / p_minus[n] > *ratio_bound * (1.0 + kRelTol)) return n;
    return std::nullopt;
  }
};

}  // namespace orlicz

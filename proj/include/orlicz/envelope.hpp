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

// Scalar-gradient envelopes. For one-dimensional gradients the quasiconvex
// envelope is the convex envelope, so Q(f^n) is a lower convex hull on a
// xi-lattice and
//
//   Q_inf f = sup_n (Q f^n)^{1/n}
//
// is computed per frozen x. Hulls of f^n are taken in the log domain so
// large n neither overflows nor underflows.

#include <functional>
#include <string>
#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

/// f(x_fixed, .) sampled on the uniform lattice xi_i = -R + i*h, i = 0..K-1.
struct SampledDensity {
  std::vector<double> xi;
  std::vector<double> values;
  double radius = 0.0;
  double step = 0.0;
  Point x_fixed{};

  static SampledDensity sample(const std::function<double(double)>& f, double radius, std::size_t points,
                               Point x_fixed = {}) {
    if (points < 3) throw ArgumentError("density lattice needs at least 3 points");
    if (!(radius > 0)) throw ArgumentError("density lattice radius must be positive");
    SampledDensity d;
    d.radius = radius;
    d.step = 2.0 * radius / static_cast<double>(points - 1);
    d.x_fixed = x_fixed;
    d.xi.resize(points);
    d.values.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
      d.xi[i] = -radius + static_cast<double>(i) * d.step;
      d.values[i] = f(d.xi[i]);
    }
    d.validate();
    return d;
  }

  static SampledDensity from_values(std::vector<double> xi, std::vector<double> values) {
    SampledDensity d;
    if (xi.size() != values.size()) throw ArgumentError("lattice and values differ in length");
    if (xi.size() < 3) throw ArgumentError("density lattice needs at least 3 points");
    d.radius = std::max(std::abs(xi.front()), std::abs(xi.back()));
    d.step = (xi.back() - xi.front()) / static_cast<double>(xi.size() - 1);
    d.xi = std::move(xi);
    d.values = std::move(values);
    d.validate();
    return d;
  }

  [[nodiscard]] std::size_t size() const { return xi.size(); }

  void validate() const {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      if (!std::isfinite(values[i]) || values[i] < 0.0) throw DomainError("sampled density must be finite and >= 0");
      if (i > 0 && !(xi[i] > xi[i - 1])) throw ArgumentError("density lattice must be strictly increasing");
    }
  }
};

struct EnvelopeResult {
  std::vector<double> xi;
  std::vector<double> values;
  /// max_i (input_i - envelope_i); zero when the input is already convex.
  double certified_gap = 0.0;
  /// Lattice indices of the hull vertices (convex_envelope only).
  std::vector<std::size_t> hull;
  /// Ladder diagnostics (q_infinity only).
  int reached_n = 0;
  double last_increment = 0.0;

  /// Piecewise-linear interpolation on the lattice.
  [[nodiscard]] double operator()(double x) const {
    if (x < xi.front() || x > xi.back())
      throw DomainError("envelope queried at " + format_double(x) + ", outside its lattice; increase the radius");
    const auto it = std::upper_bound(xi.begin(), xi.end(), x);
    if (it == xi.end()) return values.back();
    const std::size_t b = static_cast<std::size_t>(it - xi.begin());
    const std::size_t a = b - 1;
    const double theta = (x - xi[a]) / (xi[b] - xi[a]);
    return values[a] + theta * (values[b] - values[a]);
  }
};

/// Lower convex hull of {(xi_i, f_i)} by a monotone-chain pass, evaluated
/// back on the lattice. Collinear interior points are dropped from the hull.
inline EnvelopeResult convex_envelope(const SampledDensity& d) {
  const auto& x = d.xi;
  const auto& f = d.values;
  if (x.size() < 3) throw ArgumentError("convex envelope needs at least 3 points");
  std::vector<std::size_t> hull;
  hull.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2];
      const std::size_t a = hull.back();
      const double cross = (x[a] - x[o]) * (f[i] - f[o]) - (f[a] - f[o]) * (x[i] - x[o]);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }

  EnvelopeResult r;
  r.xi = x;
  r.values.resize(x.size());
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const std::size_t a = hull[k];
    const std::size_t b = hull[k + 1];
    r.values[a] = f[a];
    for (std::size_t i = a + 1; i < b; ++i)
      r.values[i] = f[a] + (f[b] - f[a]) * (x[i] - x[a]) / (x[b] - x[a]);
  }
  r.values[hull.back()] = f[hull.back()];
  for (std::size_t i = 0; i < x.size(); ++i) r.certified_gap = std::max(r.certified_gap, f[i] - r.values[i]);
  r.hull = std::move(hull);
  return r;
}

namespace detail {

/// log((1 - theta) e^la + theta e^lb) for theta in [0, 1].
inline double log_chord(double la, double lb, double theta) {
  const double ta = theta < 1.0 ? std::log1p(-theta) + la : -kInf;
  const double tb = theta > 0.0 ? std::log(theta) + lb : -kInf;
  return log_add_exp(ta, tb);
}

}  // namespace detail

/// Convex envelope of exp(log_values) on the lattice, returned in the log
/// domain. Entries may be -inf (zero density).
inline std::vector<double> log_convex_envelope(std::span<const double> xi, std::span<const double> log_values) {
  const std::size_t n = xi.size();
  std::vector<std::size_t> hull;
  hull.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2];
      const std::size_t a = hull.back();
      const double theta = (xi[a] - xi[o]) / (xi[i] - xi[o]);
      // a stays only if it lies strictly below the chord o -> i.
      if (log_values[a] < detail::log_chord(log_values[o], log_values[i], theta)) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const std::size_t a = hull[k];
    const std::size_t b = hull[k + 1];
    out[a] = log_values[a];
    for (std::size_t i = a + 1; i < b; ++i)
      out[i] = detail::log_chord(log_values[a], log_values[b], (xi[i] - xi[a]) / (xi[b] - xi[a]));
  }
  out[hull.back()] = log_values[hull.back()];
  return out;
}

/// e_n = (Q f^n)^{1/n} on the lattice.
inline std::vector<double> envelope_root(const SampledDensity& d, double n) {
  if (!(n >= 1.0)) throw ArgumentError("envelope power must be >= 1");
  std::vector<double> logs(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) logs[i] = d.values[i] > 0 ? n * std::log(d.values[i]) : -kInf;
  auto env = log_convex_envelope(d.xi, logs);
  for (auto& v : env) v = v == -kInf ? 0.0 : std::exp(v / n);
  return env;
}

struct QInfinityOptions {
  /// Stop once the sup increment stays below this for two consecutive steps.
  double stop_increment = 1e-8;
};

/// Q_inf f = sup over the ladder of (Q f^n)^{1/n}, pointwise on the lattice.
inline EnvelopeResult q_infinity(const SampledDensity& d, std::span<const int> ladder, const QInfinityOptions& opt = {}) {
  if (ladder.empty()) throw ArgumentError("empty envelope ladder");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (ladder[k] < 1) throw ArgumentError("envelope ladder entries must be >= 1");
    if (k > 0 && ladder[k] <= ladder[k - 1]) throw ArgumentError("envelope ladder must be strictly increasing");
  }
  EnvelopeResult r;
  r.xi = d.xi;
  r.values.assign(d.size(), 0.0);
  int quiet_steps = 0;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const auto e = envelope_root(d, ladder[k]);
    double inc = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double next = std::max(r.values[i], e[i]);
      if (k > 0) inc = std::max(inc, next - r.values[i]);
      r.values[i] = next;
    }
    r.reached_n = ladder[k];
    r.last_increment = inc;
    if (k > 0) {
      quiet_steps = inc < opt.stop_increment ? quiet_steps + 1 : 0;
      if (quiet_steps >= 2) break;
    }
  }
  for (std::size_t i = 0; i < d.size(); ++i) r.certified_gap = std::max(r.certified_gap, d.values[i] - r.values[i]);
  return r;
}

struct LevelConvexityReport {
  bool pass = true;
  double worst_violation = 0.0;
  /// Lattice indices a < m < b with f(m) > max(f(a), f(b)).
  std::size_t witness_a = 0;
  std::size_t witness_m = 0;
  std::size_t witness_b = 0;
};

/// 1D level convexity: f(m) <= max(f(a), f(b)) + tol for all a < m < b. The
/// triple quantifier reduces to prefix and suffix minima.
inline LevelConvexityReport level_convexity_check(std::span<const double> values, double tol = kRelTol) {
  const std::size_t n = values.size();
  LevelConvexityReport r;
  if (n < 3) return r;
  std::vector<std::size_t> pre(n);
  std::vector<std::size_t> suf(n);
  pre[0] = 0;
  for (std::size_t i = 1; i < n; ++i) pre[i] = values[i] < values[pre[i - 1]] ? i : pre[i - 1];
  suf[n - 1] = n - 1;
  for (std::size_t i = n - 1; i-- > 0;) suf[i] = values[i] < values[suf[i + 1]] ? i : suf[i + 1];
  for (std::size_t m = 1; m + 1 < n; ++m) {
    const std::size_t a = pre[m - 1];
    const std::size_t b = suf[m + 1];
    const double bound = std::max(values[a], values[b]);
    const double v = values[m] - bound - tol * (1.0 + std::abs(bound));
    if (v > r.worst_violation) {
      r.worst_violation = v;
      r.witness_a = a;
      r.witness_m = m;
      r.witness_b = b;
      r.pass = false;
    }
  }
  return r;
}

inline LevelConvexityReport level_convexity_check(const SampledDensity& d, double tol = kRelTol) {
  return level_convexity_check(d.values, tol);
}

struct LadderReport {
  bool pass = true;
  /// max over ladder steps and lattice of e_{n_k} - e_{n_{k+1}}.
  double worst_violation = -kInf;
  /// max over ladder steps and lattice of e_{n_{k+1}} - e_{n_k}.
  double max_increase = 0.0;
  std::vector<std::vector<double>> levels;
};

/// e_{n_1} <= e_{n_2} <= ... pointwise, within tol.
inline LadderReport monotone_ladder_check(const SampledDensity& d, std::span<const int> ladder, double tol = 1e-12) {
  LadderReport r;
  for (int n : ladder) r.levels.push_back(envelope_root(d, n));
  for (std::size_t k = 1; k < r.levels.size(); ++k) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double diff = r.levels[k - 1][i] - r.levels[k][i];
      r.worst_violation = std::max(r.worst_violation, diff);
      r.max_increase = std::max(r.max_increase, -diff);
      if (diff > tol * (1.0 + std::abs(r.levels[k][i]))) r.pass = false;
    }
  }
  return r;
}

/// CSV-ready table xi, f, q_inf_f, reached_n.
inline ConvergenceReport envelope_table(const SampledDensity& d, const EnvelopeResult& q) {
  ConvergenceReport r;
  r.kind = "envelope";
  r.columns = {"xi", "f", "q_inf_f", "reached_n"};
  for (std::size_t i = 0; i < d.size(); ++i)
    r.rows.push_back({d.xi[i], d.values[i], q.values[i], static_cast<double>(q.reached_n)});
  r.meta["radius"] = format_double(d.radius);
  r.meta["step"] = format_double(d.step);
  r.meta["last_increment"] = format_double(q.last_increment);
  return r;
}

}  // namespace orlicz

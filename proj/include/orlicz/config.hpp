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

// Experiment configuration documents (JSON), hypothesis preflight, and the
// in-memory execution of one experiment.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz/core.hpp"
#include "orlicz/domain.hpp"
#include "orlicz/envelope.hpp"
#include "orlicz/integrand.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/report.hpp"
#include "orlicz/suite.hpp"
#include "orlicz/supremal.hpp"

namespace orlicz {

using Json = nlohmann::ordered_json;

enum class ExperimentKind { NormConvergence, GammaNorm, GammaModular, Envelope, InequalitySuite };

inline const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::NormConvergence: return "norm-convergence";
    case ExperimentKind::GammaNorm: return "gamma-norm";
    case ExperimentKind::GammaModular: return "gamma-modular";
    case ExperimentKind::Envelope: return "envelope";
    case ExperimentKind::InequalitySuite: return "inequality-suite";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Strict object reader: every key must be consumed, types are checked, and
// errors carry the dotted field path.

class ConfigNode {
 public:
  ConfigNode(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected a table");
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError("missing field '" + field(key) + "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigError("field '" + field(key) + "': expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("field '" + field(key) + "': must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }

  std::int64_t integer(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError("field '" + field(key) + "': expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    return has(key) ? integer(key) : mark(key, fallback);
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number_unsigned()) throw ConfigError("field '" + field(key) + "': expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return mark(key, fallback);
    const Json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError("field '" + field(key) + "': expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigError("field '" + field(key) + "': expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : mark(key, fallback);
  }

  std::vector<double> numbers(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_array()) throw ConfigError("field '" + field(key) + "': expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("field '" + field(key) + "': expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  ConfigNode child(const std::string& key) { return {raw(key), field(key)}; }

  [[nodiscard]] std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  [[nodiscard]] std::string where() const { return path_.empty() ? "config" : "field '" + path_ + "'"; }

  /// Rejects keys that were never read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key '" + field(it.key()) + "'");
  }

 private:
  template <class T>
  T mark(const std::string& key, T v) {
    seen_.insert(key);
    return v;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// ---------------------------------------------------------------------------
// Presets <-> JSON

inline Json coefficient_to_json(const Coefficient& c) {
  if (c.shape == Coefficient::Shape::Constant) return c.a;
  return Json{{"shape", Coefficient::shape_name(c.shape)}, {"a", c.a}, {"b", c.b}};
}

inline Coefficient coefficient_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return Coefficient::constant(j.get<double>());
  ConfigNode n(j, path);
  const std::string shape = n.string("shape");
  const double a = n.number("a");
  const double b = n.number("b", 0.0);
  n.finish();
  if (shape == "constant") return Coefficient::constant(a);
  if (shape == "affine") return Coefficient::affine(a, b);
  if (shape == "sinusoidal") return Coefficient::sinusoidal(a, b);
  throw ConfigError("field '" + path + ".shape': unknown coefficient shape '" + shape +
                    "' (constant, affine, sinusoidal)");
}

inline Json phi_to_json(const PhiFunction& phi) {
  Json j;
  switch (phi.kind()) {
    case PhiKind::ConstantPower:
      if (phi.weight()) {
        j = {{"kind", "weighted-power"}, {"p", phi.p().a}, {"weight", coefficient_to_json(*phi.weight())}};
      } else {
        j = {{"kind", "constant-power"}, {"p", phi.p().a}};
        if (phi.inverse_exponent_weight()) j["inverse_weight"] = true;
      }
      return j;
    case PhiKind::VariableExponent:
      j = {{"kind", "variable-exponent"}, {"p", coefficient_to_json(phi.p())}};
      if (phi.inverse_exponent_weight()) j["inverse_weight"] = true;
      return j;
    case PhiKind::DoublePhase:
      return {{"kind", "double-phase"}, {"p", phi.p().a}, {"q", phi.q().a}, {"a", coefficient_to_json(phi.a())}};
    case PhiKind::VariableDoublePhase:
      return {{"kind", "variable-double-phase"},
              {"p", coefficient_to_json(phi.p())},
              {"q", coefficient_to_json(phi.q())},
              {"a", coefficient_to_json(phi.a())}};
    case PhiKind::Orlicz:
      if (phi.orlicz_shape() == OrliczShape::ScaledPower)
        return {{"kind", "scaled-power"}, {"p", phi.p().a}, {"scale", phi.shape_param()}};
      return {{"kind", "plateau-power"}, {"p", phi.p().a}, {"plateau_end", phi.shape_param()}};
    case PhiKind::InfinityIndicator: return {{"kind", "infinity-indicator"}};
  }
  return j;
}

inline PhiFunction phi_from_json(const Json& j, const std::string& path) {
  ConfigNode n(j, path);
  const std::string kind = n.string("kind");
  auto coef = [&](const std::string& key) { return coefficient_from_json(n.raw(key), n.field(key)); };
  std::optional<PhiFunction> phi;
  try {
    if (kind == "constant-power") {
      const double p = n.number("p");
      phi = PhiFunction::constant_power(p, n.boolean("inverse_weight", false));
    } else if (kind == "weighted-power") {
      const double p = n.number("p");
      phi = PhiFunction::weighted_power(p, coef("weight"));
    } else if (kind == "variable-exponent") {
      const Coefficient p = coef("p");
      phi = PhiFunction::variable_exponent(p, n.boolean("inverse_weight", false));
    } else if (kind == "double-phase") {
      const double p = n.number("p");
      const double q = n.number("q");
      phi = PhiFunction::double_phase(p, q, coef("a"));
    } else if (kind == "variable-double-phase") {
      const Coefficient p = coef("p");
      const Coefficient q = coef("q");
      phi = PhiFunction::variable_double_phase(p, q, coef("a"));
    } else if (kind == "scaled-power") {
      const double p = n.number("p");
      phi = PhiFunction::scaled_power(p, n.number("scale"));
    } else if (kind == "plateau-power") {
      const double p = n.number("p");
      phi = PhiFunction::plateau_power(p, n.number("plateau_end"));
    } else if (kind == "infinity-indicator") {
      phi = PhiFunction::infinity_indicator();
    } else {
      throw ConfigError("field '" + n.field("kind") + "': unknown phi kind '" + kind + "'");
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(n.where() + ": " + e.what());
  }
  n.finish();
  return *phi;
}

inline Json integrand_to_json(const Integrand& f) {
  switch (f.kind()) {
    case IntegrandKind::Norm: return {{"preset", "norm"}};
    case IntegrandKind::Weighted: return {{"preset", "weighted"}, {"weight", coefficient_to_json(f.weight())}};
    case IntegrandKind::Power: return {{"preset", "power"}, {"gamma", f.gamma_param()}};
    case IntegrandKind::WeightedShift:
      return {{"preset", "weighted-shift"},
              {"weight", coefficient_to_json(f.weight())},
              {"shift", coefficient_to_json(f.shift())}};
    case IntegrandKind::DoubleWell: {
      Json j = {{"preset", "double-well"}, {"kappa", f.kappa_right()}};
      if (f.kappa_left() != f.kappa_right()) j["kappa_left"] = f.kappa_left();
      return j;
    }
    case IntegrandKind::StateWeighted: return {{"preset", "state-weighted"}};
    case IntegrandKind::Tabulated: throw ArgumentError("tabulated integrands are not configurable");
  }
  return {};
}

inline Integrand integrand_from_json(const Json& j, const std::string& path) {
  ConfigNode n(j, path);
  const std::string preset = n.string("preset");
  auto coef = [&](const std::string& key) { return coefficient_from_json(n.raw(key), n.field(key)); };
  std::optional<Integrand> f;
  try {
    if (preset == "norm") {
      f = Integrand::norm();
    } else if (preset == "weighted") {
      f = Integrand::weighted(coef("weight"));
    } else if (preset == "power") {
      f = Integrand::power(n.number("gamma"));
    } else if (preset == "weighted-shift") {
      const Coefficient w = coef("weight");
      f = Integrand::weighted_shift(w, coef("shift"));
    } else if (preset == "double-well") {
      const double k = n.number("kappa");
      std::optional<double> kl;
      if (n.has("kappa_left")) kl = n.number("kappa_left");
      f = Integrand::double_well(k, kl);
    } else if (preset == "state-weighted") {
      f = Integrand::state_weighted();
    } else {
      throw ConfigError("field '" + n.field("preset") + "': unknown integrand preset '" + preset + "'");
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(n.where() + ": " + e.what());
  }
  n.finish();
  return *f;
}

/// Scalar field presets for boundary data and norm-convergence inputs:
/// affine u = value + slope . x, quadratic u = value + coef * x1^2.
struct FieldSpec {
  enum class Preset { Affine, Quadratic };
  Preset preset = Preset::Affine;
  double value = 0.0;
  std::array<double, 2> slope{0.0, 0.0};
  double coef = 0.0;

  [[nodiscard]] double operator()(const Point& x) const {
    if (preset == Preset::Quadratic) return value + coef * x[0] * x[0];
    return value + slope[0] * x[0] + slope[1] * x[1];
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline Json field_to_json(const FieldSpec& f, int dim) {
  if (f.preset == FieldSpec::Preset::Quadratic) return {{"preset", "quadratic"}, {"value", f.value}, {"coef", f.coef}};
  return {{"preset", "affine"},
          {"value", f.value},
          {"slope", std::vector<double>(f.slope.begin(), f.slope.begin() + dim)}};
}

inline FieldSpec field_from_json(const Json& j, const std::string& path, int dim) {
  ConfigNode n(j, path);
  FieldSpec f;
  const std::string preset = n.string("preset");
  f.value = n.number("value", 0.0);
  if (preset == "affine") {
    if (n.has("slope")) {
      const auto s = n.numbers("slope");
      if (s.size() != static_cast<std::size_t>(dim))
        throw ConfigError("field '" + n.field("slope") + "': needs one entry per grid axis");
      for (int a = 0; a < dim; ++a) f.slope[a] = s[a];
    }
  } else if (preset == "quadratic") {
    f.preset = FieldSpec::Preset::Quadratic;
    f.coef = n.number("coef");
  } else {
    throw ConfigError("field '" + n.field("preset") + "': unknown field preset '" + preset + "' (affine, quadratic)");
  }
  n.finish();
  return f;
}

// ---------------------------------------------------------------------------

struct LadderSpec {
  PhiFunction base = PhiFunction::constant_power(1.0);
  double start = 2.0;
  double factor = 2.0;
  int count = 10;
  std::optional<double> ratio_bound;
};

struct HypothesisSpec {
  double L = 1.0;
  double c = 1.0;
  std::optional<double> a0_beta;
  double h5_sup = 1e-2;
  double h5_root = 0.95;
};

struct Tolerances {
  double norm = 1e-6;
  double gap = 3e-3;
  double value = 5e-3;
  double recovery = 5e-3;
  double l1 = 5e-3;
  double feas = 1e-9;
  double delta = 0.05;
  double small = 1e-3;
  double large = 1e3;
  double inequality = 1e-9;
};

struct EnvelopeSpec {
  double radius = 4.0;
  std::size_t points = 801;
  int ladder_start = 1;
  int ladder_factor = 2;
  int ladder_count = 11;
  double stop_increment = 1e-8;

  [[nodiscard]] std::vector<int> ladder() const {
    std::vector<int> out;
    long long v = ladder_start;
    for (int k = 0; k < ladder_count; ++k, v *= ladder_factor) out.push_back(static_cast<int>(v));
    return out;
  }
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::NormConvergence;
  std::optional<std::uint64_t> seed;
  Grid grid;
  std::optional<LadderSpec> ladder;
  std::optional<Integrand> integrand;
  FieldSpec field;
  std::vector<double> probes{0.5, 1.0, 1.5};
  HypothesisSpec hypotheses;
  Tolerances tolerances;
  EnvelopeSpec envelope;
  MinimizeOptions minimize;
  int suite_cases = 500;
  int suite_cells = 64;
  std::string output_dir = "orlicz-out";
};

/// Canonical form: every field written, defaults included, so that the echo
/// reparses to an equal configuration.
inline Json to_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = kind_name(c.kind);
  if (c.seed) j["seed"] = *c.seed;
  j["grid"] = to_json(c.grid);
  if (c.ladder) {
    Json l = {{"phi", phi_to_json(c.ladder->base)},
              {"start", c.ladder->start},
              {"factor", c.ladder->factor},
              {"count", c.ladder->count}};
    if (c.ladder->ratio_bound) l["ratio_bound"] = *c.ladder->ratio_bound;
    j["ladder"] = std::move(l);
  }
  if (c.integrand) j["integrand"] = integrand_to_json(*c.integrand);
  j[c.kind == ExperimentKind::NormConvergence ? "field" : "boundary"] = field_to_json(c.field, c.grid.dim());
  if (c.kind == ExperimentKind::GammaModular) j["probes"] = c.probes;
  Json h = {{"L", c.hypotheses.L}, {"c", c.hypotheses.c}};
  if (c.hypotheses.a0_beta) h["a0_beta"] = *c.hypotheses.a0_beta;
  h["h5_sup"] = c.hypotheses.h5_sup;
  h["h5_root"] = c.hypotheses.h5_root;
  j["hypotheses"] = std::move(h);
  const Tolerances& t = c.tolerances;
  j["tolerances"] = {{"norm", t.norm},         {"gap", t.gap},     {"value", t.value}, {"recovery", t.recovery},
                     {"l1", t.l1},             {"feas", t.feas},   {"delta", t.delta}, {"small", t.small},
                     {"large", t.large},       {"inequality", t.inequality}};
  const EnvelopeSpec& e = c.envelope;
  j["envelope"] = {{"radius", e.radius},
                   {"points", e.points},
                   {"ladder_start", e.ladder_start},
                   {"ladder_factor", e.ladder_factor},
                   {"ladder_count", e.ladder_count},
                   {"stop_increment", e.stop_increment}};
  j["minimize"] = {{"max_iterations", c.minimize.max_iterations},
                   {"gtol", c.minimize.gtol},
                   {"smoothing", c.minimize.smoothing},
                   {"eps", c.minimize.eps}};
  j["suite"] = {{"cases", c.suite_cases}, {"cells", c.suite_cells}};
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

inline Grid grid_config(ConfigNode n) {
  const std::int64_t dim = n.integer("dim");
  if (dim != 1 && dim != 2) throw ConfigError("field '" + n.field("dim") + "': must be 1 or 2");
  const auto lo = n.numbers("lower");
  const auto hi = n.numbers("upper");
  const Json& cj = n.raw("cells");
  std::vector<int> cells;
  if (!cj.is_array()) throw ConfigError("field '" + n.field("cells") + "': expected an array of integers");
  for (const auto& v : cj) {
    if (!v.is_number_integer()) throw ConfigError("field '" + n.field("cells") + "': expected an array of integers");
    cells.push_back(v.get<int>());
  }
  n.finish();
  if (lo.size() != static_cast<std::size_t>(dim) || hi.size() != lo.size() || cells.size() != lo.size())
    throw ConfigError(n.where() + ": lower, upper and cells need one entry per axis");
  try {
    if (dim == 1) return Grid::interval(lo[0], hi[0], cells[0]);
    return Grid::box({lo[0], lo[1]}, {hi[0], hi[1]}, cells[0], cells[1]);
  } catch (const Error& e) {
    throw ConfigError(n.where() + ": " + e.what());
  }
}

inline ExperimentConfig config_from_json(const Json& j) {
  ConfigNode root(j, "");
  ExperimentConfig c;
  const std::string kind = root.string("experiment");
  if (kind == "norm-convergence") c.kind = ExperimentKind::NormConvergence;
  else if (kind == "gamma-norm") c.kind = ExperimentKind::GammaNorm;
  else if (kind == "gamma-modular") c.kind = ExperimentKind::GammaModular;
  else if (kind == "envelope") c.kind = ExperimentKind::Envelope;
  else if (kind == "inequality-suite") c.kind = ExperimentKind::InequalitySuite;
  else
    throw ConfigError("field 'experiment': unknown kind '" + kind +
                      "' (norm-convergence, gamma-norm, gamma-modular, envelope, inequality-suite)");

  if (root.has("seed")) c.seed = root.unsigned_integer("seed");
  if (c.kind == ExperimentKind::InequalitySuite && !c.seed)
    throw ConfigError("missing field 'seed': randomized suites need a seed");

  const bool needs_grid = c.kind != ExperimentKind::Envelope && c.kind != ExperimentKind::InequalitySuite;
  if (root.has("grid") || needs_grid) c.grid = grid_config(root.child("grid"));

  const bool needs_ladder = c.kind == ExperimentKind::NormConvergence || c.kind == ExperimentKind::GammaNorm ||
                            c.kind == ExperimentKind::GammaModular;
  if (root.has("ladder") || needs_ladder) {
    ConfigNode l = root.child("ladder");
    LadderSpec s;
    s.base = phi_from_json(l.raw("phi"), l.field("phi"));
    s.start = l.number("start", 2.0);
    s.factor = l.number("factor", 2.0);
    s.count = static_cast<int>(l.integer("count"));
    if (l.has("ratio_bound")) s.ratio_bound = l.number("ratio_bound");
    l.finish();
    if (s.count < 3) throw ConfigError("field 'ladder.count': a ladder needs at least 3 entries");
    if (!(s.start > 0)) throw ConfigError("field 'ladder.start': must be positive");
    if (!(s.factor > 1)) throw ConfigError("field 'ladder.factor': must exceed 1");
    if (s.base.is_indicator()) throw ConfigError("field 'ladder.phi': the indicator has no exponent to scale");
    c.ladder = s;
  }

  const bool needs_integrand = c.kind == ExperimentKind::GammaNorm || c.kind == ExperimentKind::GammaModular ||
                               c.kind == ExperimentKind::Envelope;
  if (root.has("integrand") || needs_integrand) c.integrand = integrand_from_json(root.raw("integrand"), "integrand");

  const char* field_key = c.kind == ExperimentKind::NormConvergence ? "field" : "boundary";
  if (root.has(field_key)) c.field = field_from_json(root.raw(field_key), field_key, c.grid.dim());
  else if (c.kind == ExperimentKind::NormConvergence || c.kind == ExperimentKind::GammaNorm)
    throw ConfigError(std::string("missing field '") + field_key + "'");

  if (root.has("probes")) {
    c.probes = root.numbers("probes");
    if (c.probes.empty()) throw ConfigError("field 'probes': needs at least one slope");
  }

  if (root.has("hypotheses")) {
    ConfigNode h = root.child("hypotheses");
    c.hypotheses.L = h.number("L", 1.0);
    c.hypotheses.c = h.number("c", 1.0);
    if (h.has("a0_beta")) c.hypotheses.a0_beta = h.number("a0_beta");
    c.hypotheses.h5_sup = h.number("h5_sup", c.hypotheses.h5_sup);
    c.hypotheses.h5_root = h.number("h5_root", c.hypotheses.h5_root);
    h.finish();
    if (c.hypotheses.L < 1.0) throw ConfigError("field 'hypotheses.L': must be >= 1");
    if (c.hypotheses.c < 1.0) throw ConfigError("field 'hypotheses.c': must be >= 1");
    if (c.hypotheses.a0_beta && !(*c.hypotheses.a0_beta > 0 && *c.hypotheses.a0_beta <= 1))
      throw ConfigError("field 'hypotheses.a0_beta': must lie in (0, 1]");
  }

  if (root.has("tolerances")) {
    ConfigNode t = root.child("tolerances");
    Tolerances& d = c.tolerances;
    d.norm = t.number("norm", d.norm);
    d.gap = t.number("gap", d.gap);
    d.value = t.number("value", d.value);
    d.recovery = t.number("recovery", d.recovery);
    d.l1 = t.number("l1", d.l1);
    d.feas = t.number("feas", d.feas);
    d.delta = t.number("delta", d.delta);
    d.small = t.number("small", d.small);
    d.large = t.number("large", d.large);
    d.inequality = t.number("inequality", d.inequality);
    t.finish();
    for (double v : {d.norm, d.gap, d.value, d.recovery, d.l1, d.feas, d.delta, d.small, d.large, d.inequality})
      if (!(v > 0)) throw ConfigError("field 'tolerances': every tolerance must be positive");
  }

  if (root.has("envelope")) {
    ConfigNode e = root.child("envelope");
    EnvelopeSpec& d = c.envelope;
    d.radius = e.number("radius", d.radius);
    d.points = static_cast<std::size_t>(e.integer("points", static_cast<std::int64_t>(d.points)));
    d.ladder_start = static_cast<int>(e.integer("ladder_start", d.ladder_start));
    d.ladder_factor = static_cast<int>(e.integer("ladder_factor", d.ladder_factor));
    d.ladder_count = static_cast<int>(e.integer("ladder_count", d.ladder_count));
    d.stop_increment = e.number("stop_increment", d.stop_increment);
    e.finish();
    if (!(d.radius > 0) || d.points < 3) throw ConfigError("field 'envelope': needs radius > 0 and points >= 3");
    if (d.ladder_start < 1 || d.ladder_factor < 2 || d.ladder_count < 3 || d.ladder_count > 30)
      throw ConfigError("field 'envelope': ladder needs start >= 1, factor >= 2 and 3..30 entries");
  }

  if (root.has("minimize")) {
    ConfigNode m = root.child("minimize");
    c.minimize.max_iterations = static_cast<int>(m.integer("max_iterations", c.minimize.max_iterations));
    c.minimize.gtol = m.number("gtol", c.minimize.gtol);
    c.minimize.smoothing = m.boolean("smoothing", c.minimize.smoothing);
    c.minimize.eps = m.number("eps", c.minimize.eps);
    m.finish();
    if (c.minimize.max_iterations < 1) throw ConfigError("field 'minimize.max_iterations': must be positive");
  }

  if (root.has("suite")) {
    ConfigNode s = root.child("suite");
    c.suite_cases = static_cast<int>(s.integer("cases", c.suite_cases));
    c.suite_cells = static_cast<int>(s.integer("cells", c.suite_cells));
    s.finish();
    if (c.suite_cases < 1 || c.suite_cells < 2) throw ConfigError("field 'suite': needs cases >= 1 and cells >= 2");
  }

  if (root.has("output")) {
    ConfigNode o = root.child("output");
    c.output_dir = o.string("dir", c.output_dir);
    o.finish();
  }
  root.finish();
  return c;
}

/// Parses config text; syntax errors report line and column.
inline ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Preflight

struct PreflightReport {
  std::vector<Assertion> checks;

  [[nodiscard]] bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  [[nodiscard]] std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c.name + (c.detail.empty() ? "" : ": " + c.detail));
    return out;
  }
};

inline ExponentSequence build_sequence(const ExperimentConfig& c) {
  if (!c.ladder) throw ArgumentError("experiment has no ladder");
  const auto xs = c.grid.cell_centers();
  return ExponentSequence::ladder(c.ladder->base, c.ladder->start, c.ladder->factor, c.ladder->count, xs,
                                  c.ladder->ratio_bound);
}

inline bool variable_exponent_sequence(const ExponentSequence& seq) {
  for (const auto& phi : seq.entries)
    if (phi.kind() == PhiKind::VariableExponent || phi.kind() == PhiKind::VariableDoublePhase) return true;
  return false;
}

/// Runs every hypothesis checker relevant to the experiment kind.
inline PreflightReport preflight(const ExperimentConfig& c) {
  PreflightReport r;
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    r.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  if (c.kind == ExperimentKind::InequalitySuite) {
    add("seed present", c.seed.has_value());
    return r;
  }
  if (c.kind == ExperimentKind::Envelope) {
    const Integrand& f = *c.integrand;
    add("scalar x-independent integrand", !f.x_dependent() && !f.depends_on_u(),
        std::string(kind_name(f.kind())) + " needs a single density f(xi)");
    return r;
  }

  const ExponentSequence seq = build_sequence(c);
  const SamplePlan plan = SamplePlan::standard(c.grid, 32);
  const bool section5 = variable_exponent_sequence(seq);

  add("(5.3) p_n^- strictly increasing", seq.strictly_increasing());
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const PhiWReport w = check_phi_w(seq.entries[n], plan);
    if (!w.pass) {
      add("phi_n is a weak Phi-function", false, "n = " + std::to_string(n + 1) + ": " + w.failure);
      break;
    }
    if (n + 1 == seq.size()) add("phi_n is a weak Phi-function", true);
  }

  // (H3): one L for the whole ladder.
  {
    bool ok = true;
    std::string detail;
    for (std::size_t n = 0; n < seq.size() && ok; ++n) {
      const AIncReport a = check_aInc(seq.entries[n], seq.p_minus[n], c.hypotheses.L, plan);
      if (!a.pass) {
        ok = false;
        detail = "n = " + std::to_string(n + 1) + ", p_n = " + format_double(seq.p_minus[n]) + " needs L >= " +
                 format_double(a.estimated_constant) + " > " + format_double(c.hypotheses.L);
      }
    }
    add("(H3) (aInc)_{p_n} with a uniform constant L", ok, detail);
  }

  if (c.hypotheses.a0_beta) {
    bool ok = true;
    std::string detail;
    for (std::size_t n = 0; n < seq.size() && ok; ++n) {
      const A0Report a = check_A0(seq.entries[n], *c.hypotheses.a0_beta, plan.xs);
      if (!a.pass) {
        ok = false;
        detail = "n = " + std::to_string(n + 1);
      }
    }
    add("(A0) with beta = " + format_double(*c.hypotheses.a0_beta), ok, detail);
  }

  if (c.kind == ExperimentKind::NormConvergence || c.kind == ExperimentKind::GammaNorm) {
    bool ok = true;
    std::string detail;
    for (std::size_t n = 0; n < seq.size() && ok; ++n) {
      const AnchorReport a = check_anchor(seq.entries[n], c.hypotheses.c, plan.xs);
      if (!a.pass) {
        ok = false;
        detail = "n = " + std::to_string(n + 1) + ": phi_n^-(1) = " + format_double(a.phi_minus_1) +
                 ", phi_n^+(1) = " + format_double(a.phi_plus_1) + ", c = " + format_double(c.hypotheses.c);
      }
    }
    add("(H4) anchor 1/c <= phi_n(x,1) <= c", ok, detail);
  }

  if (c.kind == ExperimentKind::GammaModular) {
    const H5Report h5 = check_h5(seq, plan.xs, c.hypotheses.h5_sup, c.hypotheses.h5_root);
    add("(H5) limsup phi_n^+(1) = 0 and liminf phi_n^-(1)^{1/p_n} >= 1", h5.pass,
        "final phi_n^+(1) = " + format_double(h5.phi_plus_1.back()) + ", phi_n^-(1)^{1/p_n} = " +
            format_double(h5.root_phi_minus_1.back()));
  }

  if (c.kind == ExperimentKind::GammaNorm || c.kind == ExperimentKind::GammaModular) {
    const Integrand& f = *c.integrand;
    const Integrand::Growth g = f.growth(plan.xs);
    const int grad_dim = c.grid.dim();
    const GrowthCheck gc = check_growth(f, g, plan.xs, grad_dim, c.seed.value_or(7));
    add("(H2) f >= alpha |xi|^gamma with alpha > 0", g.alpha > 0 && gc.lower_pass,
        "alpha = " + format_double(g.alpha) + ", gamma = " + format_double(g.gamma));
    if (f.scalar_only()) add("scalar-gradient integrand on a 1D grid", grad_dim == 1);
    if (section5) {
      add("(5.1) f <= C (|xi|^gamma + 1)", g.upper_c.has_value() && gc.upper_pass);
      add("f independent of u", !f.depends_on_u());
      const auto bad = seq.ratio_violation();
      std::string detail;
      if (!seq.ratio_bound) detail = "no ratio_bound configured";
      else if (bad)
        detail = "n = " + std::to_string(*bad + 1) + ": p_n^+/p_n^- = " +
                 format_double(seq.p_plus[*bad] / seq.p_minus[*bad]) + " > " + format_double(*seq.ratio_bound);
      add("(5.4) p_n^+/p_n^- <= beta", seq.ratio_bound.has_value() && !bad, detail);
    }
    if (c.kind == ExperimentKind::GammaNorm && !seq.entries.front().has_monomials())
      add("phi_n differentiable for minimization", false, describe(seq.entries.front()));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Execution

struct RunResult {
  std::vector<ConvergenceReport> reports;
  /// Named nodal fields written next to the reports.
  std::vector<std::pair<std::string, GridFunction>> fields;

  [[nodiscard]] bool pass() const {
    for (const auto& r : reports)
      if (!r.all_pass()) return false;
    return true;
  }
};

inline DirichletProblem dirichlet_problem(const ExperimentConfig& c) {
  return DirichletProblem::scalar(c.grid, *c.integrand, [&](const Point& x) { return c.field(x); });
}

inline RunResult execute(const ExperimentConfig& c, bool report_only) {
  RunResult out;
  switch (c.kind) {
    case ExperimentKind::NormConvergence: {
      const ExponentSequence seq = build_sequence(c);
      const auto u = sample_cells(c.grid, [&](const Point& x) { return c.field(x); });
      NormConvergenceOptions opt;
      opt.tol = c.tolerances.norm;
      opt.L = c.hypotheses.L;
      opt.c = c.hypotheses.c;
      opt.gap_threshold = c.tolerances.gap;
      opt.report_only = report_only;
      ConvergenceReport r = norm_convergence_experiment(c.grid, u, seq, opt);
      if (!report_only) {
        const auto gaps = r.column_values("gap");
        const std::size_t tail = gaps.size() - std::min(gaps.size(), std::max<std::size_t>(2, gaps.size() / 3));
        bool dec = true;
        for (std::size_t n = tail + 1; n < gaps.size(); ++n) dec = dec && gaps[n] < gaps[n - 1];
        r.assert_that("gap strictly decreasing on the ladder tail", dec);
      }
      out.reports.push_back(std::move(r));
      break;
    }
    case ExperimentKind::GammaNorm: {
      const ExponentSequence seq = build_sequence(c);
      GammaNormOptions opt;
      opt.value_threshold = c.tolerances.value;
      opt.recovery_threshold = c.tolerances.recovery;
      opt.l1_threshold = c.tolerances.l1;
      opt.report_only = report_only;
      opt.minimize = c.minimize;
      opt.minimize.envelope_radius = c.envelope.radius;
      opt.minimize.envelope_points = c.envelope.points;
      opt.envelope_ladder = c.envelope.ladder();
      GammaNormResult g = gamma_experiment_norm(dirichlet_problem(c), seq, opt);
      out.fields.emplace_back("minimizer", g.minimizers.back());
      if (g.oracle) out.fields.emplace_back("oracle", GridFunction::sample(c.grid, g.oracle->u));
      out.reports.push_back(std::move(g.report));
      break;
    }
    case ExperimentKind::GammaModular: {
      const ExponentSequence seq = build_sequence(c);
      GammaModularOptions opt;
      opt.delta = c.tolerances.delta;
      opt.small_threshold = c.tolerances.small;
      opt.large_threshold = c.tolerances.large;
      opt.report_only = report_only;
      opt.envelope_radius = c.envelope.radius;
      opt.envelope_points = c.envelope.points;
      out.reports.push_back(gamma_experiment_modular(dirichlet_problem(c), seq, c.probes, opt));
      break;
    }
    case ExperimentKind::Envelope: {
      const Integrand& f = *c.integrand;
      const Point x0 = c.grid.lower();
      const auto d = SampledDensity::sample([&](double s) { return f(x0, s); }, c.envelope.radius, c.envelope.points);
      const auto lad = c.envelope.ladder();
      QInfinityOptions qo;
      qo.stop_increment = c.envelope.stop_increment;
      const EnvelopeResult q = q_infinity(d, lad, qo);
      ConvergenceReport r = envelope_table(d, q);
      r.report_only = report_only;
      if (!report_only) {
        const LadderReport mono = monotone_ladder_check(d, lad);
        r.assert_that("(Q f^n)^{1/n} nondecreasing in n", mono.pass, "worst " + format_double(mono.worst_violation));
        const LevelConvexityReport lc = level_convexity_check(q.values);
        r.assert_that("Q_inf f is level convex", lc.pass, "worst " + format_double(lc.worst_violation));
        bool below = true;
        for (std::size_t i = 0; i < d.size(); ++i) below = below && q.values[i] <= d.values[i] * (1.0 + kRelTol);
        r.assert_that("Q_inf f <= f", below);
      }
      out.reports.push_back(std::move(r));
      break;
    }
    case ExperimentKind::InequalitySuite: {
      SuiteOptions opt;
      opt.seed = *c.seed;
      opt.cases = c.suite_cases;
      opt.cells = c.suite_cells;
      opt.tol = c.tolerances.inequality;
      ConvergenceReport r = inequality_suite(opt);
      if (report_only) {
        r.assertions.clear();
        r.report_only = true;
      }
      out.reports.push_back(std::move(r));
      break;
    }
  }
  return out;
}

}  // namespace orlicz

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

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz/core.hpp"
#include "orlicz/domain.hpp"

namespace orlicz {

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Tabular experiment output: named numeric columns, one row per ladder
/// entry (or per sample), plus the assertions evaluated on the table.
struct ConvergenceReport {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Assertion> assertions;
  std::map<std::string, std::string> meta;
  /// Label columns: the numeric cell in rows is a placeholder and the text
  /// here is what gets written.
  std::map<std::string, std::vector<std::string>> text;
  /// Report-only runs carry no assertions and are marked in every output.
  bool report_only = false;

  [[nodiscard]] bool all_pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }

  [[nodiscard]] std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ArgumentError("no report column '" + std::string(name) + "'");
  }

  [[nodiscard]] std::vector<double> column_values(std::string_view name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }

  void assert_that(std::string name, bool pass, std::string detail = {}) {
    assertions.push_back({std::move(name), pass, std::move(detail)});
  }
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline void write_csv(const ConvergenceReport& r, std::ostream& os) {
  std::vector<const std::vector<std::string>*> labels(r.columns.size(), nullptr);
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    os << (i ? "," : "") << csv_field(r.columns[i]);
    if (auto it = r.text.find(r.columns[i]); it != r.text.end()) labels[i] = &it->second;
  }
  os << '\n';
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << (labels[i] ? csv_field(labels[i]->at(k)) : format_double(row[i]));
    os << '\n';
  }
}

inline nlohmann::ordered_json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline double number_from_json(const nlohmann::ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw ArgumentError("expected a number or 'inf' in report JSON");
}

inline nlohmann::ordered_json to_json(const ConvergenceReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = r.kind;
  j["report_only"] = r.report_only;
  j["columns"] = r.columns;
  if (!r.text.empty()) {
    auto names = nlohmann::ordered_json::array();
    for (const auto& c : r.columns)
      if (r.text.count(c)) names.push_back(c);
    j["text_columns"] = std::move(names);
  }
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    auto jr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.rows[k].size(); ++i) {
      auto it = r.text.find(r.columns[i]);
      if (it != r.text.end()) jr.push_back(it->second.at(k));
      else jr.push_back(number_to_json(r.rows[k][i]));
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  auto asserts = nlohmann::ordered_json::array();
  for (const auto& a : r.assertions) asserts.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  j["assertions"] = std::move(asserts);
  j["meta"] = r.meta;
  return j;
}

inline ConvergenceReport report_from_json(const nlohmann::ordered_json& j) {
  ConvergenceReport r;
  r.kind = j.at("kind").get<std::string>();
  r.report_only = j.value("report_only", false);
  r.columns = j.at("columns").get<std::vector<std::string>>();
  std::vector<bool> is_text(r.columns.size(), false);
  if (j.contains("text_columns"))
    for (const auto& name : j.at("text_columns")) is_text[r.column(name.get<std::string>())] = true;
  for (const auto& jr : j.at("rows")) {
    if (jr.size() != r.columns.size()) throw ArgumentError("report row arity does not match columns");
    std::vector<double> row;
    for (std::size_t i = 0; i < jr.size(); ++i) {
      if (is_text[i]) {
        r.text[r.columns[i]].push_back(jr[i].get<std::string>());
        row.push_back(0.0);
      } else {
        row.push_back(number_from_json(jr[i]));
      }
    }
    r.rows.push_back(std::move(row));
  }
  if (j.contains("assertions"))
    for (const auto& a : j.at("assertions"))
      r.assertions.push_back({a.at("name").get<std::string>(), a.at("pass").get<bool>(), a.value("detail", "")});
  if (j.contains("meta")) r.meta = j.at("meta").get<std::map<std::string, std::string>>();
  return r;
}

// Grid functions as JSON: {"grid": {...}, "codomain_dim": d, "values": [...]}.

inline nlohmann::ordered_json to_json(const Grid& g) {
  nlohmann::ordered_json j;
  j["dim"] = g.dim();
  j["lower"] = std::vector<double>(g.lower().begin(), g.lower().begin() + g.dim());
  j["upper"] = std::vector<double>(g.upper().begin(), g.upper().begin() + g.dim());
  j["cells"] = std::vector<int>(g.cells().begin(), g.cells().begin() + g.dim());
  return j;
}

inline Grid grid_from_json(const nlohmann::ordered_json& j) {
  const int dim = j.at("dim").get<int>();
  const auto lo = j.at("lower").get<std::vector<double>>();
  const auto hi = j.at("upper").get<std::vector<double>>();
  const auto cells = j.at("cells").get<std::vector<int>>();
  if (dim < 1 || dim > 2 || lo.size() != static_cast<std::size_t>(dim) || hi.size() != lo.size() ||
      cells.size() != lo.size())
    throw ArgumentError("grid JSON arity does not match its dimension");
  if (dim == 1) return Grid::interval(lo[0], hi[0], cells[0]);
  return Grid::box({lo[0], lo[1]}, {hi[0], hi[1]}, cells[0], cells[1]);
}

inline nlohmann::ordered_json to_json(const GridFunction& u) {
  nlohmann::ordered_json j;
  j["grid"] = to_json(u.grid());
  j["codomain_dim"] = u.codomain_dim();
  j["values"] = std::vector<double>(u.values().begin(), u.values().end());
  return j;
}

inline GridFunction grid_function_from_json(const nlohmann::ordered_json& j) {
  return {grid_from_json(j.at("grid")), j.at("codomain_dim").get<int>(), j.at("values").get<std::vector<double>>()};
}

}  // namespace orlicz

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

// Box domains, nodal grid functions, forward-difference gradients and
// midpoint quadrature. All pointwise data (phi, integrands) is sampled at
// cell centers; this is the "sample lattice" shared by every module.

#include <array>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "orlicz/core.hpp"

namespace orlicz {

using Point = std::array<double, 2>;

class Grid {
 public:
  Grid() : Grid(1, {0.0, 0.0}, {1.0, 0.0}, {2, 1}) {}

  Grid(int dim, Point lower, Point upper, std::array<int, 2> cells)
      : dim_(dim), lower_(lower), upper_(upper), cells_(cells) {
    if (dim != 1 && dim != 2) throw ArgumentError("grid dimension must be 1 or 2");
    if (dim == 1) {
      lower_[1] = 0.0;
      upper_[1] = 1.0;
      cells_[1] = 1;
    }
    for (int a = 0; a < dim; ++a) {
      if (!(upper_[a] > lower_[a])) throw ArgumentError("grid extent must have upper > lower on every axis");
      if (cells_[a] < 2) throw ArgumentError("grid needs at least 2 cells per axis");
    }
  }

  static Grid interval(double a, double b, int cells) { return Grid(1, {a, 0.0}, {b, 0.0}, {cells, 1}); }
  static Grid box(Point lower, Point upper, int cells_x, int cells_y) {
    return Grid(2, lower, upper, {cells_x, cells_y});
  }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const Point& lower() const { return lower_; }
  [[nodiscard]] const Point& upper() const { return upper_; }
  [[nodiscard]] int cells(int axis) const { return cells_[axis]; }
  [[nodiscard]] const std::array<int, 2>& cells() const { return cells_; }
  [[nodiscard]] double spacing(int axis) const { return (upper_[axis] - lower_[axis]) / cells_[axis]; }

  [[nodiscard]] double cell_measure() const {
    double m = spacing(0);
    if (dim_ == 2) m *= spacing(1);
    return m;
  }
  [[nodiscard]] double measure() const {
    double m = upper_[0] - lower_[0];
    if (dim_ == 2) m *= upper_[1] - lower_[1];
    return m;
  }

  [[nodiscard]] std::size_t cell_count() const {
    return static_cast<std::size_t>(cells_[0]) * static_cast<std::size_t>(dim_ == 2 ? cells_[1] : 1);
  }
  [[nodiscard]] int nodes_per_axis(int axis) const { return cells_[axis] + 1; }
  [[nodiscard]] std::size_t node_count() const {
    return static_cast<std::size_t>(cells_[0] + 1) * static_cast<std::size_t>(dim_ == 2 ? cells_[1] + 1 : 1);
  }

  [[nodiscard]] std::size_t node_index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * static_cast<std::size_t>(cells_[0] + 1);
  }
  [[nodiscard]] std::size_t cell_index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * static_cast<std::size_t>(cells_[0]);
  }

  [[nodiscard]] Point node(std::size_t n) const {
    const int stride = cells_[0] + 1;
    const int i = static_cast<int>(n % stride);
    const int j = static_cast<int>(n / stride);
    return {lower_[0] + i * spacing(0), dim_ == 2 ? lower_[1] + j * spacing(1) : 0.0};
  }
  [[nodiscard]] Point cell_center(std::size_t c) const {
    const int i = static_cast<int>(c % cells_[0]);
    const int j = static_cast<int>(c / cells_[0]);
    return {lower_[0] + (i + 0.5) * spacing(0), dim_ == 2 ? lower_[1] + (j + 0.5) * spacing(1) : 0.0};
  }
  [[nodiscard]] std::vector<Point> cell_centers() const {
    std::vector<Point> out(cell_count());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = cell_center(c);
    return out;
  }

  [[nodiscard]] bool is_boundary_node(std::size_t n) const {
    const int stride = cells_[0] + 1;
    const int i = static_cast<int>(n % stride);
    const int j = static_cast<int>(n / stride);
    if (i == 0 || i == cells_[0]) return true;
    return dim_ == 2 && (j == 0 || j == cells_[1]);
  }

  /// Node indices at the corners of cell c, in the order (i,j), (i+1,j),
  /// (i,j+1), (i+1,j+1). 1D cells have two corners.
  [[nodiscard]] std::array<std::size_t, 4> cell_nodes(std::size_t c) const {
    const int i = static_cast<int>(c % cells_[0]);
    const int j = static_cast<int>(c / cells_[0]);
    if (dim_ == 1) return {node_index(i), node_index(i + 1), 0, 0};
    return {node_index(i, j), node_index(i + 1, j), node_index(i, j + 1), node_index(i + 1, j + 1)};
  }
  [[nodiscard]] int corners_per_cell() const { return dim_ == 1 ? 2 : 4; }

  /// True when x lies in the closed box.
  [[nodiscard]] bool contains(const Point& x) const {
    for (int a = 0; a < dim_; ++a)
      if (x[a] < lower_[a] || x[a] > upper_[a]) return false;
    return true;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  Point lower_;
  Point upper_;
  std::array<int, 2> cells_;
};

/// Nodal field u : Omega -> R^d. values[node * d + k] is component k.
class GridFunction {
 public:
  GridFunction(Grid grid, int codomain_dim) : grid_(std::move(grid)), d_(codomain_dim) {
    if (d_ < 1) throw ArgumentError("codomain dimension must be >= 1");
    values_.assign(grid_.node_count() * static_cast<std::size_t>(d_), 0.0);
  }
  GridFunction(Grid grid, int codomain_dim, std::vector<double> values)
      : grid_(std::move(grid)), d_(codomain_dim), values_(std::move(values)) {
    if (d_ < 1) throw ArgumentError("codomain dimension must be >= 1");
    if (values_.size() != grid_.node_count() * static_cast<std::size_t>(d_))
      throw ArgumentError("grid function value count does not match the grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
  }

  /// Scalar field sampled at the nodes.
  static GridFunction sample(const Grid& grid, const std::function<double(const Point&)>& f) {
    std::vector<double> v(grid.node_count());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = f(grid.node(n));
    return {grid, 1, std::move(v)};
  }

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] int codomain_dim() const { return d_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] double at(std::size_t node, int k = 0) const { return values_[node * d_ + k]; }
  double& at(std::size_t node, int k = 0) { return values_[node * d_ + k]; }

  /// Average of the cell's corner values, component k: u evaluated at the
  /// cell center under the bilinear interpretation.
  [[nodiscard]] double cell_value(std::size_t c, int k = 0) const {
    const auto nodes = grid_.cell_nodes(c);
    const int corners = grid_.corners_per_cell();
    double s = 0;
    for (int q = 0; q < corners; ++q) s += at(nodes[q], k);
    return s / corners;
  }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  Grid grid_;
  int d_;
  std::vector<double> values_;
};

/// Per-cell Jacobian, layout values[cell * N*d + k*N + j] = d u_k / d x_j.
struct GradientField {
  Grid grid;
  int codomain_dim = 1;
  std::vector<double> values;

  [[nodiscard]] int block() const { return grid.dim() * codomain_dim; }
  [[nodiscard]] std::span<const double> cell(std::size_t c) const {
    return std::span<const double>(values).subspan(c * block(), block());
  }
};

/// Forward differences from the lower-left corner of each cell.
inline GradientField gradient(const GridFunction& u) {
  const Grid& g = u.grid();
  const int n_dim = g.dim();
  const int d = u.codomain_dim();
  GradientField out{g, d, std::vector<double>(g.cell_count() * n_dim * d)};
  const double hx = g.spacing(0);
  const double hy = n_dim == 2 ? g.spacing(1) : 1.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const auto nodes = g.cell_nodes(c);
    for (int k = 0; k < d; ++k) {
      double* xi = &out.values[c * n_dim * d + k * n_dim];
      xi[0] = (u.at(nodes[1], k) - u.at(nodes[0], k)) / hx;
      if (n_dim == 2) xi[1] = (u.at(nodes[2], k) - u.at(nodes[0], k)) / hy;
    }
  }
  return out;
}

/// Midpoint rule: sum of g(cell) * |cell|. Any +inf cell makes the result +inf.
inline double integrate(const Grid& grid, std::span<const double> g) {
  if (g.size() != grid.cell_count()) throw ArgumentError("field size does not match the grid's cell count");
  CompensatedSum s;
  bool infinite = false;
  for (double v : g) {
    require_not_nan(v, "integrate");
    if (v == kInf) infinite = true;
    else s.add(v);
  }
  if (infinite) return kInf;
  return s.value() * grid.cell_measure();
}

/// Discrete essential supremum: max over cells.
inline double sup_cellwise(std::span<const double> g) {
  if (g.empty()) throw ArgumentError("empty cell field");
  double m = -kInf;
  for (double v : g) m = std::max(m, require_not_nan(v, "sup_cellwise"));
  return m;
}

/// Cell-centered samples of a scalar function.
inline std::vector<double> sample_cells(const Grid& grid, const std::function<double(const Point&)>& f) {
  std::vector<double> out(grid.cell_count());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = f(grid.cell_center(c));
  return out;
}

// ---------------------------------------------------------------------------
// CSV: header "x1[,x2],u1,...,ud", one row per node in node-index order.

inline void write_csv(const GridFunction& u, std::ostream& os) {
  const Grid& g = u.grid();
  os << "x1";
  if (g.dim() == 2) os << ",x2";
  for (int k = 0; k < u.codomain_dim(); ++k) os << ",u" << (k + 1);
  os << '\n';
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Point x = g.node(n);
    os << format_double(x[0]);
    if (g.dim() == 2) os << ',' << format_double(x[1]);
    for (int k = 0; k < u.codomain_dim(); ++k) os << ',' << format_double(u.at(n, k));
    os << '\n';
  }
}

/// Reads nodal values for a known grid. Coordinates must match the grid's
/// nodes to 1e-12 relative.
inline GridFunction read_csv(const Grid& grid, std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("grid function CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) header.push_back(tok);
  }
  const int d = static_cast<int>(header.size()) - grid.dim();
  if (d < 1) throw IoError("grid function CSV header has no value columns");
  std::vector<double> values;
  values.reserve(grid.node_count() * d);
  std::size_t n = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (n >= grid.node_count()) throw IoError("grid function CSV has more rows than grid nodes");
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(parse_double(tok));
    if (row.size() != header.size()) throw IoError("grid function CSV row " + std::to_string(n + 2) + " has wrong arity");
    const Point x = grid.node(n);
    for (int a = 0; a < grid.dim(); ++a)
      if (std::abs(row[a] - x[a]) > 1e-12 * (1.0 + std::abs(x[a])))
        throw IoError("grid function CSV row " + std::to_string(n + 2) + " coordinates do not match the grid");
    for (int k = 0; k < d; ++k) values.push_back(row[grid.dim() + k]);
    ++n;
  }
  if (n != grid.node_count()) throw IoError("grid function CSV has fewer rows than grid nodes");
  return {grid, d, std::move(values)};
}

}  // namespace orlicz

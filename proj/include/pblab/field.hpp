#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pblab/grid.hpp"

namespace pblab {

/// Node-sampled scalar function on a Grid2D.  Values are stored row-major
/// with the y index outer: values[j*nx + i].
///
/// `support_margin` is the number of boundary node layers guaranteed to be
/// exactly zero (plane topology only); it is the discrete stand-in for
/// compact support.
class ScalarField {
public:
  ScalarField() = default;

  ScalarField(Grid2D grid, std::vector<double> values, int support_margin = 0)
      : grid_(grid), values_(std::move(values)), support_margin_(support_margin) {
    validate();
  }

  explicit ScalarField(Grid2D grid, double fill = 0.0, int support_margin = 0)
      : grid_(grid),
        values_(static_cast<std::size_t>(grid.node_count()), fill),
        support_margin_(support_margin) {
    validate();
  }

  /// Samples f(x, y) at every node, then force-zeroes `margin` boundary
  /// layers (plane topology; torus fields are left untouched).
  template <class F>
  static ScalarField sample(const Grid2D& grid, F&& f, int margin = 0) {
    std::vector<double> v(static_cast<std::size_t>(grid.node_count()));
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) v[idx(grid, i, j)] = f(grid.x(i), grid.y(j));
    ScalarField out(grid, std::move(v), 0);
    if (grid.topology == Topology::plane && margin > 0) out.apply_margin(margin);
    return out;
  }

  const Grid2D& grid() const { return grid_; }
  int nx() const { return grid_.nx; }
  int ny() const { return grid_.ny; }
  int support_margin() const { return support_margin_; }

  double operator()(int i, int j) const { return values_[idx(grid_, i, j)]; }
  double& operator()(int i, int j) { return values_[idx(grid_, i, j)]; }

  /// Node access with torus wraparound (plane callers must stay in range).
  double at_wrapped(int i, int j) const {
    return values_[idx(grid_, grid_.wrap_x(i), grid_.wrap_y(j))];
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// True when the field models a compactly supported function: torus
  /// fields always do, plane fields need at least one zero boundary layer.
  bool compactly_supported() const {
    return grid_.topology == Topology::torus || support_margin_ >= 1;
  }

  /// Force-zeroes `margin` node layers along the plane boundary and records
  /// the margin.  Returns true when a previously nonzero node was truncated.
  bool apply_margin(int margin) {
    if (margin < 0) throw std::invalid_argument("support margin must be >= 0");
    if (grid_.topology == Topology::torus || margin == 0) return false;
    bool truncated = false;
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) {
        if (i < margin || j < margin || i >= grid_.nx - margin || j >= grid_.ny - margin) {
          double& v = values_[idx(grid_, i, j)];
          if (v != 0.0) truncated = true;
          v = 0.0;
        }
      }
    support_margin_ = std::max(support_margin_, margin);
    return truncated;
  }

  /// Largest number of all-zero boundary layers (capped at half the grid).
  int measured_margin() const {
    if (grid_.topology == Topology::torus) return 0;
    const int cap = std::min(grid_.nx, grid_.ny) / 2;
    int m = 0;
    while (m < cap) {
      bool clean = true;
      for (int i = 0; i < grid_.nx && clean; ++i)
        clean = (*this)(i, m) == 0.0 && (*this)(i, grid_.ny - 1 - m) == 0.0;
      for (int j = 0; j < grid_.ny && clean; ++j)
        clean = (*this)(m, j) == 0.0 && (*this)(grid_.nx - 1 - m, j) == 0.0;
      if (!clean) break;
      ++m;
    }
    return m;
  }

  void set_support_margin(int m) {
    support_margin_ = m;
    validate();
  }

private:
  static std::size_t idx(const Grid2D& g, int i, int j) {
    return static_cast<std::size_t>(j) * g.nx + i;
  }

  void validate() const {
    if (values_.size() != static_cast<std::size_t>(grid_.node_count()))
      throw std::invalid_argument("field size does not match grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("field values must be finite");
    if (support_margin_ < 0) throw std::invalid_argument("support margin must be >= 0");
    if (grid_.topology == Topology::plane && support_margin_ > 0) {
      const int m = support_margin_;
      for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i)
          if ((i < m || j < m || i >= grid_.nx - m || j >= grid_.ny - m) &&
              values_[idx(grid_, i, j)] != 0.0)
            throw std::invalid_argument("support margin layers must be exactly zero");
    }
  }

  Grid2D grid_;
  std::vector<double> values_;
  int support_margin_ = 0;
};

/// Two-component vector field sampled on the same node lattice.
struct VectorField2D {
  Grid2D grid;
  std::vector<double> u, v;  // components along x and y

  VectorField2D() = default;
  explicit VectorField2D(const Grid2D& g)
      : grid(g),
        u(static_cast<std::size_t>(g.node_count()), 0.0),
        v(static_cast<std::size_t>(g.node_count()), 0.0) {}

  double& ux(int i, int j) { return u[static_cast<std::size_t>(j) * grid.nx + i]; }
  double& vy(int i, int j) { return v[static_cast<std::size_t>(j) * grid.nx + i]; }
  double ux(int i, int j) const { return u[static_cast<std::size_t>(j) * grid.nx + i]; }
  double vy(int i, int j) const { return v[static_cast<std::size_t>(j) * grid.nx + i]; }
};

inline void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid() != b.grid()) throw std::invalid_argument("fields live on different grids");
}

/// Subset of quadrature cells, stored as a bitmap over the cell lattice.
class CellSet {
public:
  CellSet() = default;
  explicit CellSet(const Grid2D& g)
      : cnx_(g.cell_nx()), cny_(g.cell_ny()),
        bits_(static_cast<std::size_t>(cnx_) * cny_, 0) {}

  int cell_nx() const { return cnx_; }
  int cell_ny() const { return cny_; }

  bool contains(int ci, int cj) const { return bits_[bit(ci, cj)] != 0; }

  void add(int ci, int cj) {
    auto& b = bits_[bit(ci, cj)];
    if (!b) {
      b = 1;
      ++count_;
    }
  }

  void add_all() {
    std::fill(bits_.begin(), bits_.end(), 1);
    count_ = static_cast<std::size_t>(cnx_) * cny_;
  }

  std::size_t count() const { return count_; }
  bool empty() const { return count_ == 0; }

  template <class F>
  void for_each(F&& f) const {
    for (int cj = 0; cj < cny_; ++cj)
      for (int ci = 0; ci < cnx_; ++ci)
        if (bits_[bit(ci, cj)]) f(ci, cj);
  }

  CellSet& unite(const CellSet& other) {
    if (other.cnx_ != cnx_ || other.cny_ != cny_)
      throw std::invalid_argument("cell sets cover different lattices");
    for (std::size_t k = 0; k < bits_.size(); ++k)
      if (other.bits_[k] && !bits_[k]) {
        bits_[k] = 1;
        ++count_;
      }
    return *this;
  }

  static CellSet all(const Grid2D& g) {
    CellSet s(g);
    s.add_all();
    return s;
  }

private:
  std::size_t bit(int ci, int cj) const {
    return static_cast<std::size_t>(cj) * cnx_ + ci;
  }

  int cnx_ = 0, cny_ = 0;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

/// The four node indices at the corners of cell (ci, cj), wrapped on a torus.
struct CellCorners {
  int i0, j0, i1, j1;
};

inline CellCorners cell_corners(const Grid2D& g, int ci, int cj) {
  if (g.topology == Topology::torus)
    return {ci, cj, g.wrap_x(ci + 1), g.wrap_y(cj + 1)};
  return {ci, cj, ci + 1, cj + 1};
}

inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.values().size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.values()[k] - b.values()[k];
  return ScalarField(a.grid(), std::move(v),
                     std::min(a.support_margin(), b.support_margin()));
}

}  // namespace pblab

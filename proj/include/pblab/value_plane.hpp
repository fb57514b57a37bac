#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pblab/calculus.hpp"
#include "pblab/field.hpp"
#include "pblab/norms.hpp"

namespace pblab {

/// Axis-aligned square [i/level,(i+1)/level] x [j/level,(j+1)/level] in the
/// value plane of Phi = (F, G).  Corners lie on the (1/level)-grid.
struct ValueSquare {
  int level = 1;  // n for cover squares, k*n after subdivision
  int i = 0, j = 0;

  double u0() const { return static_cast<double>(i) / level; }
  double u1() const { return static_cast<double>(i + 1) / level; }
  double v0() const { return static_cast<double>(j) / level; }
  double v1() const { return static_cast<double>(j + 1) / level; }
  double side() const { return 1.0 / level; }

  bool operator==(const ValueSquare& o) const {
    return level == o.level && i == o.i && j == o.j;
  }
  bool operator<(const ValueSquare& o) const {
    if (level != o.level) return level < o.level;
    if (j != o.j) return j < o.j;
    return i < o.i;
  }
};

/// Bounding box of one grid cell's four corner values under Phi.
struct CellBox {
  double f0, f1, g0, g1;

  bool intersects(double uf0, double uf1, double ug0, double ug1) const {
    return f1 >= uf0 && f0 <= uf1 && g1 >= ug0 && g0 <= ug1;
  }
  bool contains(double u, double v) const {
    return u >= f0 && u <= f1 && v >= g0 && v <= g1;
  }
};

/// Rasterization of Phi = (F, G): one value-plane bounding box per grid
/// cell, with a uniform bucket index for fast region queries.
class PhiImage {
public:
  PhiImage(const ScalarField& F, const ScalarField& G) : grid_(F.grid()) {
    require_same_grid(F, G);
    const int cnx = grid_.cell_nx(), cny = grid_.cell_ny();
    boxes_.resize(static_cast<std::size_t>(cnx) * cny);
    f_lo_ = g_lo_ = std::numeric_limits<double>::infinity();
    f_hi_ = g_hi_ = -std::numeric_limits<double>::infinity();
    for (int cj = 0; cj < cny; ++cj)
      for (int ci = 0; ci < cnx; ++ci) {
        const auto c = cell_corners(grid_, ci, cj);
        const double f00 = F(c.i0, c.j0), f10 = F(c.i1, c.j0), f01 = F(c.i0, c.j1),
                     f11 = F(c.i1, c.j1);
        const double g00 = G(c.i0, c.j0), g10 = G(c.i1, c.j0), g01 = G(c.i0, c.j1),
                     g11 = G(c.i1, c.j1);
        CellBox b{std::min({f00, f10, f01, f11}), std::max({f00, f10, f01, f11}),
                  std::min({g00, g10, g01, g11}), std::max({g00, g10, g01, g11})};
        boxes_[cell_index(ci, cj)] = b;
        f_lo_ = std::min(f_lo_, b.f0);
        f_hi_ = std::max(f_hi_, b.f1);
        g_lo_ = std::min(g_lo_, b.g0);
        g_hi_ = std::max(g_hi_, b.g1);
      }
    build_index();
  }

  const Grid2D& grid() const { return grid_; }
  const CellBox& box(int ci, int cj) const { return boxes_[cell_index(ci, cj)]; }
  const CellBox& box(std::size_t cell) const { return boxes_[cell]; }

  int cell_index(int ci, int cj) const { return cj * grid_.cell_nx() + ci; }
  int cell_i(int cell) const { return cell % grid_.cell_nx(); }
  int cell_j(int cell) const { return cell / grid_.cell_nx(); }

  double f_lo() const { return f_lo_; }
  double f_hi() const { return f_hi_; }
  double g_lo() const { return g_lo_; }
  double g_hi() const { return g_hi_; }

  /// Visits every cell whose box contains the point (u, v).  A point lies in
  /// exactly one bucket, so cells are visited at most once.
  template <class Fn>
  void for_cells_at(double u, double v, Fn&& fn) const {
    if (nb_ == 0) return;
    const int bu = bucket_of_f(u), bv = bucket_of_g(v);
    if (bu < 0 || bv < 0 || bu >= nb_ || bv >= nb_) return;
    const std::size_t k = static_cast<std::size_t>(bv) * nb_ + bu;
    for (std::size_t t = start_[k]; t < start_[k + 1]; ++t) {
      const int cell = items_[t];
      if (boxes_[cell].contains(u, v)) fn(cell);
    }
  }

  /// Cells whose box intersects the closed rectangle, in ascending cell order.
  std::vector<int> cells_intersecting(double uf0, double uf1, double ug0,
                                      double ug1) const {
    std::vector<int> out;
    if (nb_ == 0) return out;
    const int bu0 = bucket_of_f(uf0), bu1 = bucket_of_f(uf1);
    const int bv0 = bucket_of_g(ug0), bv1 = bucket_of_g(ug1);
    if (bu1 < 0 || bv1 < 0 || bu0 >= nb_ || bv0 >= nb_) return out;
    for (int bv = std::max(0, bv0); bv <= std::min(nb_ - 1, bv1); ++bv)
      for (int bu = std::max(0, bu0); bu <= std::min(nb_ - 1, bu1); ++bu) {
        const std::size_t k = static_cast<std::size_t>(bv) * nb_ + bu;
        for (std::size_t t = start_[k]; t < start_[k + 1]; ++t) {
          const int cell = items_[t];
          if (boxes_[cell].intersects(uf0, uf1, ug0, ug1)) out.push_back(cell);
        }
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

private:
  void build_index() {
    const std::size_t ncells = boxes_.size();
    nb_ = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(ncells))), 8, 512);
    if (!(f_hi_ > f_lo_)) f_hi_ = f_lo_ + 1.0;  // degenerate (constant) images
    if (!(g_hi_ > g_lo_)) g_hi_ = g_lo_ + 1.0;
    bw_f_ = (f_hi_ - f_lo_) / nb_;
    bw_g_ = (g_hi_ - g_lo_) / nb_;
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(nb_) * nb_ + 1, 0);
    auto for_buckets = [&](const CellBox& b, auto&& fn) {
      const int u0 = std::clamp(bucket_of_f(b.f0), 0, nb_ - 1);
      const int u1 = std::clamp(bucket_of_f(b.f1), 0, nb_ - 1);
      const int v0 = std::clamp(bucket_of_g(b.g0), 0, nb_ - 1);
      const int v1 = std::clamp(bucket_of_g(b.g1), 0, nb_ - 1);
      for (int v = v0; v <= v1; ++v)
        for (int u = u0; u <= u1; ++u) fn(static_cast<std::size_t>(v) * nb_ + u);
    };
    for (const CellBox& b : boxes_)
      for_buckets(b, [&](std::size_t k) { ++counts[k + 1]; });
    start_.assign(counts.size(), 0);
    for (std::size_t k = 1; k < counts.size(); ++k) start_[k] = start_[k - 1] + counts[k];
    items_.resize(start_.back());
    std::vector<std::size_t> cursor(start_.begin(), start_.end() - 1);
    for (std::size_t cell = 0; cell < boxes_.size(); ++cell)
      for_buckets(boxes_[cell],
                  [&](std::size_t k) { items_[cursor[k]++] = static_cast<int>(cell); });
  }

  int bucket_of_f(double u) const {
    return static_cast<int>(std::floor((u - f_lo_) / bw_f_));
  }
  int bucket_of_g(double v) const {
    return static_cast<int>(std::floor((v - g_lo_) / bw_g_));
  }

  Grid2D grid_;
  std::vector<CellBox> boxes_;
  double f_lo_, f_hi_, g_lo_, g_hi_;
  int nb_ = 0;
  double bw_f_ = 1, bw_g_ = 1;
  std::vector<std::size_t> start_;
  std::vector<int> items_;
};

/// Per-cell bounding boxes of Phi (the spec'd rasterization primitive).
inline std::vector<CellBox> phi_image_cells(const ScalarField& F, const ScalarField& G) {
  PhiImage img(F, G);
  std::vector<CellBox> out;
  out.reserve(static_cast<std::size_t>(img.grid().cell_count()));
  for (int cj = 0; cj < img.grid().cell_ny(); ++cj)
    for (int ci = 0; ci < img.grid().cell_nx(); ++ci) out.push_back(img.box(ci, cj));
  return out;
}

/// The set K_n: level-n value squares accepted as regular-value squares.
struct ValueCover {
  int n = 1;
  double tau = 0;
  std::vector<ValueSquare> squares;
};

namespace detail {

/// Min over the four corner nodes of |bracket|, one value per cell.
inline std::vector<double> min_abs_corner_per_cell(const ScalarField& bracket) {
  const Grid2D& g = bracket.grid();
  std::vector<double> out(static_cast<std::size_t>(g.cell_count()));
  for (int cj = 0; cj < g.cell_ny(); ++cj)
    for (int ci = 0; ci < g.cell_nx(); ++ci) {
      const auto c = cell_corners(g, ci, cj);
      out[static_cast<std::size_t>(cj) * g.cell_nx() + ci] =
          std::min({std::abs(bracket(c.i0, c.j0)), std::abs(bracket(c.i1, c.j0)),
                    std::abs(bracket(c.i0, c.j1)), std::abs(bracket(c.i1, c.j1))});
    }
  return out;
}

}  // namespace detail

/// Builds K_n.  A level-n square is accepted when
///  (a) a slightly inflated copy of it is covered by the union of cell
///      boxes (the discrete proxy for lying in the interior of im Phi), and
///  (b) every cell whose box meets the inflated square has |{F,G}| >= tau
///      at all four corners (the discrete proxy for regularity).
/// The inflation realizes "regular values in the interior of the image":
/// squares touching the boundary of the image must be rejected.
inline ValueCover regular_value_cover(const ScalarField& F, const ScalarField& G, int n,
                                      double tau) {
  if (n < 1) throw std::invalid_argument("cover level n must be >= 1");
  if (!(tau > 0)) throw std::invalid_argument("regularity threshold tau must be > 0");
  ValueCover cover;
  cover.n = n;
  cover.tau = tau;

  const ScalarField br = poisson_bracket(F, G);
  const std::vector<double> min_abs = detail::min_abs_corner_per_cell(br);
  const PhiImage img(F, G);

  const long long i_lo = static_cast<long long>(std::floor(img.f_lo() * n)) - 1;
  const long long i_hi = static_cast<long long>(std::ceil(img.f_hi() * n)) + 1;
  const long long j_lo = static_cast<long long>(std::floor(img.g_lo() * n)) - 1;
  const long long j_hi = static_cast<long long>(std::ceil(img.g_hi() * n)) + 1;
  if ((i_hi - i_lo) * (j_hi - j_lo) > (1ll << 24))
    throw std::invalid_argument("cover candidate grid too large for this value range");

  constexpr int kSamples = 10;        // coverage lattice per square side
  constexpr double kInflate = 0.05;   // interior test: square inflated by 5% of its side

  for (long long j = j_lo; j < j_hi; ++j)
    for (long long i = i_lo; i < i_hi; ++i) {
      const ValueSquare s{n, static_cast<int>(i), static_cast<int>(j)};
      const double z = kInflate * s.side();
      const double uf0 = s.u0() - z, uf1 = s.u1() + z;
      const double ug0 = s.v0() - z, ug1 = s.v1() + z;
      const std::vector<int> cells = img.cells_intersecting(uf0, uf1, ug0, ug1);
      if (cells.empty()) continue;

      bool regular = true;
      for (int cell : cells)
        if (min_abs[cell] < tau) {
          regular = false;
          break;
        }
      if (!regular) continue;

      bool covered = true;
      for (int a = 0; a <= kSamples && covered; ++a)
        for (int b = 0; b <= kSamples && covered; ++b) {
          const double u = uf0 + (uf1 - uf0) * a / kSamples;
          const double v = ug0 + (ug1 - ug0) * b / kSamples;
          bool hit = false;
          for (int cell : cells)
            if (img.box(cell).contains(u, v)) {
              hit = true;
              break;
            }
          covered = hit;
        }
      if (covered) cover.squares.push_back(s);
    }
  std::sort(cover.squares.begin(), cover.squares.end());
  return cover;
}

/// Splits every cover square into k^2 edge-disjoint level-(k n) squares.
inline std::vector<ValueSquare> subdivide_cover(const ValueCover& cover, int k) {
  if (k < 1) throw std::invalid_argument("subdivision factor k must be >= 1");
  std::vector<ValueSquare> out;
  out.reserve(cover.squares.size() * static_cast<std::size_t>(k) * k);
  for (const ValueSquare& s : cover.squares)
    for (int b = 0; b < k; ++b)
      for (int a = 0; a < k; ++a)
        out.push_back(ValueSquare{cover.n * k, s.i * k + a, s.j * k + b});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pblab

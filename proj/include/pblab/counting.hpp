#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pblab/norms.hpp"
#include "pblab/parallel.hpp"
#include "pblab/value_plane.hpp"

namespace pblab {

namespace detail {

struct Quad {
  double u[4], v[4];

  double signed_area() const {
    double a = 0;
    for (int k = 0; k < 4; ++k) {
      const int n = (k + 1) & 3;
      a += u[k] * v[n] - u[n] * v[k];
    }
    return 0.5 * a;
  }

  /// Nonzero-winding containment (Sunday's crossing rules).  The bilinear
  /// image of a cell boundary is treated as the straight quadrilateral
  /// through the four corner values; orientation may be either way.
  bool contains(double px, double py) const {
    int wn = 0;
    for (int k = 0; k < 4; ++k) {
      const int n = (k + 1) & 3;
      const double ax = u[k], ay = v[k], bx = u[n], by = v[n];
      const double is_left = (bx - ax) * (py - ay) - (px - ax) * (by - ay);
      if (ay <= py) {
        if (by > py && is_left > 0) ++wn;
      } else {
        if (by <= py && is_left < 0) --wn;
      }
    }
    return wn != 0;
  }
};

inline Quad cell_quad(const ScalarField& F, const ScalarField& G, int ci, int cj) {
  const auto c = cell_corners(F.grid(), ci, cj);
  // boundary order around the cell
  return Quad{{F(c.i0, c.j0), F(c.i1, c.j0), F(c.i1, c.j1), F(c.i0, c.j1)},
              {G(c.i0, c.j0), G(c.i1, c.j0), G(c.i1, c.j1), G(c.i0, c.j1)}};
}

}  // namespace detail

/// n_Phi sampled on a uniform value-plane lattice over the image of the
/// restricted cells.  counts[b*resolution + a] is the number of restricted
/// cells whose image quadrilateral contains the (a, b) sample (midpoint
/// convention), one hit per cell.
struct CountField {
  int resolution = 0;
  double f_lo = 0, f_hi = 0, g_lo = 0, g_hi = 0;
  std::vector<std::int32_t> counts;
  long long degenerate_cells = 0;  // zero-area quads, flagged and not counted

  double sample_u(int a) const {
    return f_lo + (f_hi - f_lo) * (a + 0.5) / resolution;
  }
  double sample_v(int b) const {
    return g_lo + (g_hi - g_lo) * (b + 0.5) / resolution;
  }
  double region_area() const { return (f_hi - f_lo) * (g_hi - g_lo); }

  double mean_count() const {
    long long total = 0;
    for (auto c : counts) total += c;
    return counts.empty() ? 0.0 : static_cast<double>(total) / counts.size();
  }
};

/// Number of restricted cells whose image quad contains the single point u.
inline int preimage_count_at(const PhiImage& img, const ScalarField& F,
                             const ScalarField& G, const CellSet& restrict_cells,
                             double u, double v) {
  int count = 0;
  const int cnx = img.grid().cell_nx();
  img.for_cells_at(u, v, [&](int cell) {
    const int ci = cell % cnx, cj = cell / cnx;
    if (!restrict_cells.contains(ci, cj)) return;
    const detail::Quad q = detail::cell_quad(F, G, ci, cj);
    if (q.signed_area() != 0.0 && q.contains(u, v)) ++count;
  });
  return count;
}

inline CountField preimage_count_field(const ScalarField& F, const ScalarField& G,
                                       const CellSet& restrict_cells, int resolution) {
  require_same_grid(F, G);
  if (restrict_cells.empty())
    throw std::invalid_argument("preimage counting needs a non-empty cell restriction");
  if (resolution < 2) throw std::invalid_argument("value grid resolution must be >= 2");

  const Grid2D& g = F.grid();
  CountField out;
  out.resolution = resolution;

  // Tight bounding box over the restricted cells only.
  double flo = std::numeric_limits<double>::infinity(), fhi = -flo;
  double glo = flo, ghi = -flo;
  restrict_cells.for_each([&](int ci, int cj) {
    const auto c = cell_corners(g, ci, cj);
    for (double f : {F(c.i0, c.j0), F(c.i1, c.j0), F(c.i0, c.j1), F(c.i1, c.j1)}) {
      flo = std::min(flo, f);
      fhi = std::max(fhi, f);
    }
    for (double v : {G(c.i0, c.j0), G(c.i1, c.j0), G(c.i0, c.j1), G(c.i1, c.j1)}) {
      glo = std::min(glo, v);
      ghi = std::max(ghi, v);
    }
  });
  if (!(fhi > flo)) fhi = flo + 1.0;
  if (!(ghi > glo)) ghi = glo + 1.0;
  out.f_lo = flo;
  out.f_hi = fhi;
  out.g_lo = glo;
  out.g_hi = ghi;

  const PhiImage img(F, G);
  const int cnx = g.cell_nx();
  restrict_cells.for_each([&](int ci, int cj) {
    if (detail::cell_quad(F, G, ci, cj).signed_area() == 0.0) ++out.degenerate_cells;
  });

  out.counts.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  parallel_for(0, resolution, [&](int b) {
    const double v = out.sample_v(b);
    for (int a = 0; a < resolution; ++a) {
      const double u = out.sample_u(a);
      int count = 0;
      img.for_cells_at(u, v, [&](int cell) {
        const int ci = cell % cnx, cj = cell / cnx;
        if (!restrict_cells.contains(ci, cj)) return;
        const detail::Quad q = detail::cell_quad(F, G, ci, cj);
        if (q.signed_area() != 0.0 && q.contains(u, v)) ++count;
      });
      out.counts[static_cast<std::size_t>(b) * resolution + a] = count;
    }
  });
  return out;
}

/// Two routes to the same mass: integral of |dF^dG| over the region versus
/// the integral of the preimage-count function over the value plane.
struct AreaFormulaReport {
  double lhs = 0;      // cellwise integral of |{F,G}|
  double rhs = 0;      // mean preimage count times sampled region area
  double rel_err = 0;  // |lhs-rhs| / max(lhs, rhs, tiny)
};

inline AreaFormulaReport area_formula_check(const ScalarField& F, const ScalarField& G,
                                            const CellSet& restrict_cells,
                                            int value_resolution) {
  AreaFormulaReport rep;
  const ScalarField br = poisson_bracket(F, G);
  rep.lhs = lp_integral(br, 1.0, &restrict_cells);
  const CountField cf = preimage_count_field(F, G, restrict_cells, value_resolution);
  rep.rhs = cf.mean_count() * cf.region_area();
  rep.rel_err = std::abs(rep.lhs - rep.rhs) / std::max({rep.lhs, rep.rhs, 1e-300});
  return rep;
}

}  // namespace pblab

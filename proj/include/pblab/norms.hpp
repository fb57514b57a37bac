#pragma once

#include <cmath>
#include <stdexcept>

#include "pblab/calculus.hpp"
#include "pblab/field.hpp"

namespace pblab {

/// Cell value for quadrature: mean of the four corner node values.
inline double cell_mean(const ScalarField& H, int ci, int cj) {
  const auto c = cell_corners(H.grid(), ci, cj);
  return 0.25 * (H(c.i0, c.j0) + H(c.i1, c.j0) + H(c.i0, c.j1) + H(c.i1, c.j1));
}

/// Integral of |H|^p with the corner-average midpoint rule, optionally
/// restricted to a cell mask.  This is ||H||_{L^p}^p, not the norm itself.
inline double lp_integral(const ScalarField& H, double p, const CellSet* mask = nullptr) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp norm needs finite p >= 1 (use c0_norm for p = infinity)");
  const Grid2D& g = H.grid();
  const double a = g.cell_area();
  double sum = 0.0;
  auto add = [&](int ci, int cj) {
    const double m = std::abs(cell_mean(H, ci, cj));
    sum += (p == 1.0 ? m : (p == 2.0 ? m * m : std::pow(m, p))) * a;
  };
  if (mask) {
    mask->for_each(add);
  } else {
    for (int cj = 0; cj < g.cell_ny(); ++cj)
      for (int ci = 0; ci < g.cell_nx(); ++ci) add(ci, cj);
  }
  return sum;
}

inline double lp_norm(const ScalarField& H, double p, const CellSet* mask = nullptr) {
  return std::pow(lp_integral(H, p, mask), 1.0 / p);
}

/// Max of |H| over all nodes, or over the corner nodes of the masked cells.
inline double c0_norm(const ScalarField& H, const CellSet* mask = nullptr) {
  double m = 0.0;
  if (mask) {
    mask->for_each([&](int ci, int cj) {
      const auto c = cell_corners(H.grid(), ci, cj);
      m = std::max({m, std::abs(H(c.i0, c.j0)), std::abs(H(c.i1, c.j0)),
                    std::abs(H(c.i0, c.j1)), std::abs(H(c.i1, c.j1))});
    });
  } else {
    for (double v : H.values()) m = std::max(m, std::abs(v));
  }
  return m;
}

/// Cells carrying any nonzero corner value of H; area of this set is the
/// (slightly overestimated, which is the safe direction) support area.
inline CellSet support_cells(const ScalarField& H) {
  CellSet s(H.grid());
  const Grid2D& g = H.grid();
  for (int cj = 0; cj < g.cell_ny(); ++cj)
    for (int ci = 0; ci < g.cell_nx(); ++ci) {
      const auto c = cell_corners(g, ci, cj);
      if (H(c.i0, c.j0) != 0.0 || H(c.i1, c.j0) != 0.0 || H(c.i0, c.j1) != 0.0 ||
          H(c.i1, c.j1) != 0.0)
        s.add(ci, cj);
    }
  return s;
}

inline double mask_area(const Grid2D& g, const CellSet& mask) {
  return static_cast<double>(mask.count()) * g.cell_area();
}

/// Default regularity threshold: a strict "bracket != 0" test is meaningless
/// in floating point, so use a small fraction of the bracket's sup norm.
inline double default_tau(const ScalarField& bracket) {
  return std::max(1e-8, 0.01 * c0_norm(bracket));
}

}  // namespace pblab

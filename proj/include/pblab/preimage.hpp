#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pblab/norms.hpp"
#include "pblab/value_plane.hpp"

namespace pblab {

/// One connected sheet Q' of the rasterized preimage of a value square Q.
/// Over a regular square the covering property makes each sheet map onto Q
/// about once; components violating the discrete proxies for that (constant
/// bracket sign, sheet count near 1) are flagged, not dropped.
struct PreimageComponent {
  ValueSquare square;
  std::vector<int> cells;  // ascending cell indices (cj * cell_nx + ci)
  int bracket_sign = 0;    // +1 / -1, or 0 when inconsistent
  double min_abs_bracket = 0;
  double max_abs_bracket = 0;
  double sheet_count_estimate = 0;
  bool valid = false;
  std::string flag;  // reason when invalid
};

namespace detail {

constexpr double kSheetCountLo = 0.8;
constexpr double kSheetCountHi = 1.2;

inline std::vector<PreimageComponent> extract_components(const PhiImage& img,
                                                         const ScalarField& bracket,
                                                         const ValueSquare& Q) {
  const Grid2D& g = img.grid();
  const std::vector<int> cells =
      img.cells_intersecting(Q.u0(), Q.u1(), Q.v0(), Q.v1());
  std::vector<PreimageComponent> out;
  if (cells.empty()) return out;

  // Flood fill with 4-connectivity over the gathered cells (wrapping on a
  // torus).  Membership lookups go through a local hash-free index.
  std::vector<std::int8_t> in_set(static_cast<std::size_t>(g.cell_count()), 0);
  for (int c : cells) in_set[c] = 1;
  std::vector<std::int8_t> seen(static_cast<std::size_t>(g.cell_count()), 0);
  const int cnx = g.cell_nx(), cny = g.cell_ny();
  const bool torus = g.topology == Topology::torus;

  for (int seed : cells) {
    if (seen[seed]) continue;
    PreimageComponent comp;
    comp.square = Q;
    std::vector<int> stack{seed};
    seen[seed] = 1;
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      comp.cells.push_back(cell);
      const int ci = cell % cnx, cj = cell / cnx;
      const int nbs[4][2] = {{ci - 1, cj}, {ci + 1, cj}, {ci, cj - 1}, {ci, cj + 1}};
      for (const auto& nb : nbs) {
        int ni = nb[0], nj = nb[1];
        if (torus) {
          ni = (ni + cnx) % cnx;
          nj = (nj + cny) % cny;
        } else if (ni < 0 || nj < 0 || ni >= cnx || nj >= cny) {
          continue;
        }
        const int ncell = nj * cnx + ni;
        if (in_set[ncell] && !seen[ncell]) {
          seen[ncell] = 1;
          stack.push_back(ncell);
        }
      }
    }
    std::sort(comp.cells.begin(), comp.cells.end());

    // Sign constancy and bracket range over all corner nodes of the sheet.
    bool pos = false, neg = false, zero = false;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    double integral = 0.0;
    for (int cell : comp.cells) {
      const int ci = cell % cnx, cj = cell / cnx;
      const auto c = cell_corners(g, ci, cj);
      const double vals[4] = {bracket(c.i0, c.j0), bracket(c.i1, c.j0),
                              bracket(c.i0, c.j1), bracket(c.i1, c.j1)};
      double mean = 0.0;
      for (double v : vals) {
        if (v > 0) pos = true;
        else if (v < 0) neg = true;
        else zero = true;
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
        mean += v;
      }
      integral += std::abs(0.25 * mean) * g.cell_area();
    }
    comp.min_abs_bracket = lo;
    comp.max_abs_bracket = hi;
    comp.sheet_count_estimate = integral / (Q.side() * Q.side());
    if ((pos && neg) || zero) {
      comp.bracket_sign = 0;
      comp.valid = false;
      comp.flag = "bracket sign not constant over the component";
    } else {
      comp.bracket_sign = pos ? 1 : -1;
      if (comp.sheet_count_estimate < kSheetCountLo ||
          comp.sheet_count_estimate > kSheetCountHi) {
        comp.valid = false;
        comp.flag = "sheet count estimate outside [0.8, 1.2]";
      } else {
        comp.valid = true;
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace detail

/// Connected components of the rasterized preimage of Q at threshold tau.
/// Q must lie inside a cover built with the same tau (caller contract).
inline std::vector<PreimageComponent> preimage_components(const ScalarField& F,
                                                          const ScalarField& G,
                                                          const ValueSquare& Q,
                                                          double tau) {
  (void)tau;  // the cover precondition already guarantees |{F,G}| >= tau here
  const PhiImage img(F, G);
  const ScalarField br = poisson_bracket(F, G);
  return detail::extract_components(img, br, Q);
}

/// Components for every square of a subdivided cover, sharing one image
/// rasterization.  Returns them grouped per square, in square order.
inline std::vector<std::vector<PreimageComponent>> preimage_components_all(
    const ScalarField& F, const ScalarField& G, const std::vector<ValueSquare>& squares) {
  const PhiImage img(F, G);
  const ScalarField br = poisson_bracket(F, G);
  std::vector<std::vector<PreimageComponent>> out;
  out.reserve(squares.size());
  for (const ValueSquare& Q : squares)
    out.push_back(detail::extract_components(img, br, Q));
  return out;
}

struct OscillationStats {
  double max_osc = 0;
  std::vector<double> per_component;
};

/// Oscillation of |{F,G}|^p over each component's corner nodes and the
/// maximum across components.
inline OscillationStats oscillation_stats(const ScalarField& F, const ScalarField& G,
                                          double p,
                                          const std::vector<PreimageComponent>& comps) {
  if (!(p >= 1.0)) throw std::invalid_argument("oscillation exponent p must be >= 1");
  OscillationStats stats;
  if (comps.empty()) return stats;
  const ScalarField br = poisson_bracket(F, G);
  const Grid2D& g = br.grid();
  const int cnx = g.cell_nx();
  for (const PreimageComponent& comp : comps) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int cell : comp.cells) {
      const int ci = cell % cnx, cj = cell / cnx;
      const auto c = cell_corners(g, ci, cj);
      for (double v : {br(c.i0, c.j0), br(c.i1, c.j0), br(c.i0, c.j1), br(c.i1, c.j1)}) {
        const double w = std::pow(std::abs(v), p);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
    }
    const double osc = comp.cells.empty() ? 0.0 : hi - lo;
    stats.per_component.push_back(osc);
    stats.max_osc = std::max(stats.max_osc, osc);
  }
  return stats;
}

}  // namespace pblab

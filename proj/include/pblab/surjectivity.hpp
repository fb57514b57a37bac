#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pblab/counting.hpp"
#include "pblab/norms.hpp"
#include "pblab/preimage.hpp"

namespace pblab {

struct SurjectivityReport {
  ValueSquare square;
  double delta = 0;
  int samples_total = 0;
  int samples_covered = 0;
  double covered_fraction = 0;
};

/// Checks the quantitative local-surjectivity conclusion for a perturbed
/// pair: the perturbed image of a sheet Q' must still cover the shrunk
/// square Q_delta.  Samples Q_delta on a midpoint lattice and tests each
/// sample against the perturbed image quads of the sheet's cells.
///
/// The C0 perturbation bounds are a stated precondition and are verified.
inline SurjectivityReport local_surjectivity_check(const ScalarField& F,
                                                   const ScalarField& G,
                                                   const ScalarField& Fb,
                                                   const ScalarField& Gb,
                                                   const PreimageComponent& comp,
                                                   double delta,
                                                   int samples_per_side = 12) {
  require_same_grid(F, Fb);
  require_same_grid(G, Gb);
  const int level = comp.square.level;
  if (!(delta > 0) || !(delta < 0.5 / level))
    throw std::invalid_argument("delta must lie in (0, 1/(2*level))");
  const double tol = 1e-12;
  if (c0_norm(Fb - F) > delta + tol || c0_norm(Gb - G) > delta + tol)
    throw std::invalid_argument("perturbation exceeds the stated C0 bound delta");
  if (samples_per_side < 2)
    throw std::invalid_argument("need at least 2 samples per side");

  SurjectivityReport rep;
  rep.square = comp.square;
  rep.delta = delta;

  const double u0 = comp.square.u0() + delta, u1 = comp.square.u1() - delta;
  const double v0 = comp.square.v0() + delta, v1 = comp.square.v1() - delta;

  const Grid2D& g = F.grid();
  const int cnx = g.cell_nx();
  std::vector<detail::Quad> quads;
  quads.reserve(comp.cells.size());
  for (int cell : comp.cells)
    quads.push_back(detail::cell_quad(Fb, Gb, cell % cnx, cell / cnx));

  const int m = samples_per_side;
  rep.samples_total = m * m;
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a) {
      const double u = u0 + (u1 - u0) * (a + 0.5) / m;
      const double v = v0 + (v1 - v0) * (b + 0.5) / m;
      for (const auto& q : quads)
        if (q.contains(u, v)) {
          ++rep.samples_covered;
          break;
        }
    }
  rep.covered_fraction = static_cast<double>(rep.samples_covered) / rep.samples_total;
  return rep;
}

}  // namespace pblab

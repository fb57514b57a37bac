#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pblab/norms.hpp"
#include "pblab/preimage.hpp"
#include "pblab/value_plane.hpp"

namespace pblab {

/// Union of cells whose box meets any square of the cover: the rasterized
/// preimage Phi^{-1}(K_n).
inline CellSet preimage_cells(const PhiImage& img, const std::vector<ValueSquare>& squares) {
  CellSet out(img.grid());
  const int cnx = img.grid().cell_nx();
  for (const ValueSquare& s : squares)
    for (int cell : img.cells_intersecting(s.u0(), s.u1(), s.v0(), s.v1()))
      out.add(cell % cnx, cell / cnx);
  return out;
}

/// Ingredients and value of the certified lower bound
///   (1 - 2 k n delta)^{2p} * ( ||{F,G}||_{L^p(Phi^{-1}(K_n))}^p
///                              - epsilon * area(supp {F,G}) ),
/// with the parenthesis floored at zero.
struct MainEstimateReport {
  int n = 0, k = 0;
  double delta = 0;
  double epsilon = 0;
  double p = 1;
  double tau = 0;
  double factor = 0;          // (1 - 2 k n delta)^(2p)
  double covered_norm_p = 0;  // p-th power of the covered L^p norm
  double support_area = 0;
  double bound = 0;
  double max_oscillation = 0;        // measured over the subdivision sheets
  bool epsilon_below_oscillation = false;  // bound reported but unproven
  long long cover_squares = 0;
  long long component_count = 0;
  long long flagged_components = 0;
};

inline MainEstimateReport main_estimate(const ScalarField& F, const ScalarField& G,
                                        double p, int n, int k, double delta,
                                        double epsilon, double tau) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(delta > 0) || !(delta < 0.5 / (static_cast<double>(k) * n)))
    throw std::invalid_argument("delta must lie in (0, 1/(2kn))");

  MainEstimateReport rep;
  rep.n = n;
  rep.k = k;
  rep.delta = delta;
  rep.epsilon = epsilon;
  rep.p = p;
  rep.tau = tau;

  const ScalarField br = poisson_bracket(F, G);
  const ValueCover cover = regular_value_cover(F, G, n, tau);
  rep.cover_squares = static_cast<long long>(cover.squares.size());

  const std::vector<ValueSquare> subdivided = subdivide_cover(cover, k);
  const auto per_square = preimage_components_all(F, G, subdivided);

  std::vector<PreimageComponent> all;
  for (const auto& group : per_square)
    for (const auto& comp : group) {
      ++rep.component_count;
      if (!comp.valid) ++rep.flagged_components;
      all.push_back(comp);
    }
  rep.max_oscillation = oscillation_stats(F, G, p, all).max_osc;
  rep.epsilon_below_oscillation = epsilon < rep.max_oscillation;

  const PhiImage img(F, G);
  const CellSet covered = preimage_cells(img, cover.squares);
  rep.covered_norm_p = lp_integral(br, p, &covered);
  rep.support_area = mask_area(br.grid(), support_cells(br));

  const double base = 1.0 - 2.0 * k * n * delta;
  rep.factor = std::pow(base, 2.0 * p);
  rep.bound = rep.factor * std::max(0.0, rep.covered_norm_p - epsilon * rep.support_area);
  return rep;
}

struct KnSequencePoint {
  int n = 0;
  double covered_norm_p = 0;  // ||{F,G}||^p over Phi^{-1}(K_n)
  double full_norm_p = 0;     // same integrand over the whole grid
  long long cover_squares = 0;
};

/// The covered norm for an ascending list of n, against the full-domain
/// norm it approximates.
inline std::vector<KnSequencePoint> kn_norm_sequence(const ScalarField& F,
                                                     const ScalarField& G, double p,
                                                     double tau,
                                                     const std::vector<int>& n_list) {
  for (std::size_t t = 1; t < n_list.size(); ++t)
    if (n_list[t] <= n_list[t - 1])
      throw std::invalid_argument("n_list must be strictly ascending");
  const ScalarField br = poisson_bracket(F, G);
  const PhiImage img(F, G);
  const double full = lp_integral(br, p);
  std::vector<KnSequencePoint> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    const ValueCover cover = regular_value_cover(F, G, n, tau);
    const CellSet covered = preimage_cells(img, cover.squares);
    KnSequencePoint pt;
    pt.n = n;
    pt.covered_norm_p = covered.empty() ? 0.0 : lp_integral(br, p, &covered);
    pt.full_norm_p = full;
    pt.cover_squares = static_cast<long long>(cover.squares.size());
    out.push_back(pt);
  }
  return out;
}

}  // namespace pblab

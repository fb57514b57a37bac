#pragma once

#include <utility>
#include <vector>

#include "pblab/field.hpp"

namespace pblab {

namespace detail {

// Central differences inside, 2nd-order one-sided stencils on plane
// boundaries, periodic wraparound on a torus.
inline void diff_x(const Grid2D& g, const std::vector<double>& in, std::vector<double>& out) {
  const int nx = g.nx, ny = g.ny;
  const double inv2h = 1.0 / (2.0 * g.hx);
  out.resize(in.size());
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * nx;
    if (g.topology == Topology::torus) {
      for (int i = 0; i < nx; ++i) {
        const int ip = i + 1 == nx ? 0 : i + 1;
        const int im = i == 0 ? nx - 1 : i - 1;
        out[row + i] = (in[row + ip] - in[row + im]) * inv2h;
      }
    } else {
      out[row + 0] = (-3.0 * in[row + 0] + 4.0 * in[row + 1] - in[row + 2]) * inv2h;
      for (int i = 1; i < nx - 1; ++i)
        out[row + i] = (in[row + i + 1] - in[row + i - 1]) * inv2h;
      out[row + nx - 1] =
          (3.0 * in[row + nx - 1] - 4.0 * in[row + nx - 2] + in[row + nx - 3]) * inv2h;
    }
  }
}

inline void diff_y(const Grid2D& g, const std::vector<double>& in, std::vector<double>& out) {
  const int nx = g.nx, ny = g.ny;
  const double inv2h = 1.0 / (2.0 * g.hy);
  out.resize(in.size());
  auto at = [&](int i, int j) { return in[static_cast<std::size_t>(j) * nx + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double d;
      if (g.topology == Topology::torus) {
        const int jp = j + 1 == ny ? 0 : j + 1;
        const int jm = j == 0 ? ny - 1 : j - 1;
        d = (at(i, jp) - at(i, jm)) * inv2h;
      } else if (j == 0) {
        d = (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) * inv2h;
      } else if (j == ny - 1) {
        d = (3.0 * at(i, ny - 1) - 4.0 * at(i, ny - 2) + at(i, ny - 3)) * inv2h;
      } else {
        d = (at(i, j + 1) - at(i, j - 1)) * inv2h;
      }
      out[static_cast<std::size_t>(j) * nx + i] = d;
    }
}

// Adjoints of the difference stencils: out[m] += sum_n coeff(n, m) * w[n].
// Needed for gradients of functionals of the bracket.
inline void diff_x_transpose(const Grid2D& g, const std::vector<double>& w,
                             std::vector<double>& out) {
  const int nx = g.nx, ny = g.ny;
  const double inv2h = 1.0 / (2.0 * g.hx);
  out.assign(w.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * nx;
    if (g.topology == Topology::torus) {
      for (int i = 0; i < nx; ++i) {
        const int ip = i + 1 == nx ? 0 : i + 1;
        const int im = i == 0 ? nx - 1 : i - 1;
        out[row + ip] += w[row + i] * inv2h;
        out[row + im] -= w[row + i] * inv2h;
      }
    } else {
      out[row + 0] += -3.0 * w[row + 0] * inv2h;
      out[row + 1] += 4.0 * w[row + 0] * inv2h;
      out[row + 2] += -w[row + 0] * inv2h;
      for (int i = 1; i < nx - 1; ++i) {
        out[row + i + 1] += w[row + i] * inv2h;
        out[row + i - 1] -= w[row + i] * inv2h;
      }
      out[row + nx - 1] += 3.0 * w[row + nx - 1] * inv2h;
      out[row + nx - 2] += -4.0 * w[row + nx - 1] * inv2h;
      out[row + nx - 3] += w[row + nx - 1] * inv2h;
    }
  }
}

inline void diff_y_transpose(const Grid2D& g, const std::vector<double>& w,
                             std::vector<double>& out) {
  const int nx = g.nx, ny = g.ny;
  const double inv2h = 1.0 / (2.0 * g.hy);
  out.assign(w.size(), 0.0);
  auto id = [&](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double ws = w[id(i, j)] * inv2h;
      if (g.topology == Topology::torus) {
        const int jp = j + 1 == ny ? 0 : j + 1;
        const int jm = j == 0 ? ny - 1 : j - 1;
        out[id(i, jp)] += ws;
        out[id(i, jm)] -= ws;
      } else if (j == 0) {
        out[id(i, 0)] += -3.0 * ws;
        out[id(i, 1)] += 4.0 * ws;
        out[id(i, 2)] += -ws;
      } else if (j == ny - 1) {
        out[id(i, ny - 1)] += 3.0 * ws;
        out[id(i, ny - 2)] += -4.0 * ws;
        out[id(i, ny - 3)] += ws;
      } else {
        out[id(i, j + 1)] += ws;
        out[id(i, j - 1)] -= ws;
      }
    }
}

inline int derivative_margin(int m) { return m >= 3 ? m - 1 : 0; }

}  // namespace detail

/// Central-difference partial derivatives (2nd order for smooth samples).
inline std::pair<ScalarField, ScalarField> partial_derivatives(const ScalarField& H) {
  std::vector<double> dx, dy;
  detail::diff_x(H.grid(), H.values(), dx);
  detail::diff_y(H.grid(), H.values(), dy);
  const int m = detail::derivative_margin(H.support_margin());
  return {ScalarField(H.grid(), std::move(dx), m), ScalarField(H.grid(), std::move(dy), m)};
}

/// X_H with omega = dx^dy: omega(X_H, .) = -dH forces X_H = (-H_y, H_x).
inline VectorField2D hamiltonian_vector_field(const ScalarField& H) {
  auto [hx, hy] = partial_derivatives(H);
  VectorField2D X(H.grid());
  const std::size_t n = H.values().size();
  for (std::size_t k = 0; k < n; ++k) {
    X.u[k] = -hy.values()[k];
    X.v[k] = hx.values()[k];
  }
  return X;
}

/// dF(X) evaluated nodewise with the same stencils as the bracket.
inline ScalarField directional_derivative(const ScalarField& F, const VectorField2D& X) {
  if (F.grid() != X.grid) throw std::invalid_argument("field/vector grid mismatch");
  std::vector<double> fx, fy;
  detail::diff_x(F.grid(), F.values(), fx);
  detail::diff_y(F.grid(), F.values(), fy);
  std::vector<double> out(fx.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = fy[k] * X.v[k] + fx[k] * X.u[k];
  return ScalarField(F.grid(), std::move(out), 0);
}

/// {F,G} = F_y G_x - F_x G_y, the convention fixed by omega = dx^dy together
/// with dF^dG = -{F,G} omega.  Result margin is min of the inputs' margins
/// minus one, floored at zero.
inline ScalarField poisson_bracket(const ScalarField& F, const ScalarField& G) {
  require_same_grid(F, G);
  std::vector<double> fx, fy, gx, gy;
  detail::diff_x(F.grid(), F.values(), fx);
  detail::diff_y(F.grid(), F.values(), fy);
  detail::diff_x(G.grid(), G.values(), gx);
  detail::diff_y(G.grid(), G.values(), gy);
  std::vector<double> out(fx.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = fy[k] * gx[k] - fx[k] * gy[k];
  const int m = std::max(0, std::min(F.support_margin(), G.support_margin()) - 1);
  return ScalarField(F.grid(), std::move(out), m);
}

}  // namespace pblab

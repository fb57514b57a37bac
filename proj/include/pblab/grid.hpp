#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace pblab {

enum class Topology { plane, torus };

inline const char* to_string(Topology t) {
  return t == Topology::plane ? "plane" : "torus";
}

inline Topology topology_from_string(const std::string& s) {
  if (s == "plane") return Topology::plane;
  if (s == "torus") return Topology::torus;
  throw std::invalid_argument("unknown topology '" + s + "' (expected plane or torus)");
}

/// Uniform rectangular grid carrying the area form dx^dy as the cell weight.
/// In plane topology the nodes include both bounds (spacing = extent/(n-1));
/// in torus topology the last node is identified with the first
/// (spacing = extent/n).
struct Grid2D {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  int nx = 0, ny = 0;
  Topology topology = Topology::plane;
  double hx = 0, hy = 0;

  Grid2D() = default;

  Grid2D(double x0, double x1, double y0, double y1, int nx_, int ny_, Topology topo)
      : x_min(x0), x_max(x1), y_min(y0), y_max(y1), nx(nx_), ny(ny_), topology(topo) {
    if (!(std::isfinite(x0) && std::isfinite(x1) && std::isfinite(y0) && std::isfinite(y1)))
      throw std::invalid_argument("grid bounds must be finite");
    if (!(x1 > x0) || !(y1 > y0))
      throw std::invalid_argument("grid extents must be positive");
    if (nx_ < 5 || ny_ < 5)
      throw std::invalid_argument("grid needs at least 5 nodes per axis");
    const double denx = topology == Topology::plane ? nx - 1 : nx;
    const double deny = topology == Topology::plane ? ny - 1 : ny;
    hx = (x_max - x_min) / denx;
    hy = (y_max - y_min) / deny;
  }

  double x(int i) const { return x_min + i * hx; }
  double y(int j) const { return y_min + j * hy; }

  int node_count() const { return nx * ny; }

  /// Quadrature cells: the squares between adjacent nodes.  In torus
  /// topology the last column/row wraps around to the first node.
  int cell_nx() const { return topology == Topology::plane ? nx - 1 : nx; }
  int cell_ny() const { return topology == Topology::plane ? ny - 1 : ny; }
  int cell_count() const { return cell_nx() * cell_ny(); }
  double cell_area() const { return hx * hy; }
  double area() const { return cell_count() * cell_area(); }

  int wrap_x(int i) const {
    const int n = nx;
    return ((i % n) + n) % n;
  }
  int wrap_y(int j) const {
    const int n = ny;
    return ((j % n) + n) % n;
  }

  bool operator==(const Grid2D& o) const {
    return x_min == o.x_min && x_max == o.x_max && y_min == o.y_min && y_max == o.y_max &&
           nx == o.nx && ny == o.ny && topology == o.topology;
  }
  bool operator!=(const Grid2D& o) const { return !(*this == o); }
};

inline Grid2D make_grid(double x_min, double x_max, double y_min, double y_max, int nx,
                        int ny, Topology topology) {
  return Grid2D(x_min, x_max, y_min, y_max, nx, ny, topology);
}

}  // namespace pblab

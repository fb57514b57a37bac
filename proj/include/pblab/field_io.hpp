#pragma once

#include <sstream>
#include <string>

#include "pblab/field.hpp"
#include "pblab/textio.hpp"

namespace pblab {

// Field files are plain text:
//   pbfield v1 nx ny x_min x_max y_min y_max topology
// followed by ny lines of nx space-separated reals (row-major, y outer),
// printed with 17 significant digits so values round-trip exactly.

inline std::string serialize_field(const ScalarField& f) {
  const Grid2D& g = f.grid();
  std::string out = "pbfield v1 " + std::to_string(g.nx) + " " + std::to_string(g.ny) +
                    " " + fmt_g17(g.x_min) + " " + fmt_g17(g.x_max) + " " +
                    fmt_g17(g.y_min) + " " + fmt_g17(g.y_max) + " " +
                    to_string(g.topology) + "\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) out += ' ';
      out += fmt_g17(f(i, j));
    }
    out += '\n';
  }
  return out;
}

inline ScalarField parse_field(const std::string& text) {
  std::istringstream in(text);
  std::string magic, version, topo;
  int nx = 0, ny = 0;
  double x0, x1, y0, y1;
  if (!(in >> magic >> version >> nx >> ny >> x0 >> x1 >> y0 >> y1 >> topo))
    throw std::runtime_error("malformed pbfield header");
  if (magic != "pbfield" || version != "v1")
    throw std::runtime_error("not a pbfield v1 file");
  Grid2D g(x0, x1, y0, y1, nx, ny, topology_from_string(topo));
  std::vector<double> v(static_cast<std::size_t>(g.node_count()));
  for (double& x : v)
    if (!(in >> x)) throw std::runtime_error("pbfield truncated: expected " +
                                             std::to_string(v.size()) + " values");
  ScalarField f(g, std::move(v), 0);
  f.set_support_margin(f.measured_margin());
  return f;
}

inline void save_field(const std::string& path, const ScalarField& f) {
  write_text_file(path, serialize_field(f));
}

inline ScalarField load_field(const std::string& path) {
  return parse_field(read_text_file(path));
}

}  // namespace pblab

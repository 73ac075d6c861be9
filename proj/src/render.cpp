#include "gridpart/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace gridpart {

namespace {

using Point = std::array<double, 2>;

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s(buf);
  return s == "-0.00" ? "0.00" : s;
}

struct Layout {
  double size;
  bool hex;
  int rows;
  int cols;

  Point center(Cell c) const {
    if (!hex) return {(c.col + 0.5) * size, (c.row + 0.5) * size};
    const double h = std::sqrt(3.0) * size;
    return {size + c.col * 1.5 * size, h / 2 + c.row * h + (c.col % 2 ? h / 2 : 0.0)};
  }

  std::vector<Point> corners(Cell c) const {
    const Point o = center(c);
    std::vector<Point> out;
    if (!hex) {
      const double s = size / 2;
      out = {{o[0] - s, o[1] - s}, {o[0] + s, o[1] - s}, {o[0] + s, o[1] + s}, {o[0] - s, o[1] + s}};
    } else {
      for (int i = 0; i < 6; ++i) {
        const double a = M_PI / 3 * i;
        out.push_back({o[0] + size * std::cos(a), o[1] + size * std::sin(a)});
      }
    }
    return out;
  }

  // Endpoints of the side shared by two adjacent cells.
  std::array<Point, 2> shared_side(Cell a, Cell b) const {
    const Point pa = center(a), pb = center(b);
    const double angle = std::atan2(pb[1] - pa[1], pb[0] - pa[0]);
    const double half = hex ? M_PI / 6 : M_PI / 4;
    const double reach = hex ? size : size / std::sqrt(2.0);
    return {Point{pa[0] + reach * std::cos(angle - half), pa[1] + reach * std::sin(angle - half)},
            Point{pa[0] + reach * std::cos(angle + half), pa[1] + reach * std::sin(angle + half)}};
  }

  Point extent() const {
    if (!hex) return {cols * size, rows * size};
    const double h = std::sqrt(3.0) * size;
    return {size * (1.5 * cols + 0.5), h * rows + (cols > 1 ? h / 2 : 0.0)};
  }
};

}  // namespace

std::string render_svg(const GridGraph& g, const Partition& p, const RenderOptions& opts) {
  if (!(opts.cell_size > 0.0)) throw Error("cell size must be positive");
  const Layout layout{opts.cell_size, g.topology() == Topology::Hex, g.rows(), g.cols()};
  const Point ext = layout.extent();
  const double max_weight = *std::max_element(g.weights().begin(), g.weights().end());

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(ext[0])
      << "\" height=\"" << fixed(ext[1]) << "\" viewBox=\"0 0 " << fixed(ext[0]) << ' '
      << fixed(ext[1]) << "\">\n"
      << "<g stroke=\"#ffffff\" stroke-width=\"0.5\">\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    const int id = p.part_of(v) + 1;
    const double hue = std::fmod(id * 137.508, 360.0);
    double lightness = 60.0;
    if (opts.shade_weights && max_weight > 0.0) lightness = 85.0 - 50.0 * g.weight(v) / max_weight;
    out << "<polygon points=\"";
    const auto corners = layout.corners(g.cell(v));
    for (std::size_t i = 0; i < corners.size(); ++i) {
      out << (i ? " " : "") << fixed(corners[i][0]) << ',' << fixed(corners[i][1]);
    }
    out << "\" fill=\"hsl(" << fixed(hue) << ",65%," << fixed(lightness) << "%)\"/>\n";
  }
  out << "</g>\n<g stroke=\"#000000\" stroke-width=\"" << fixed(opts.cell_size / 8)
      << "\" stroke-linecap=\"round\">\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int u : g.neighbors(v)) {
      if (u <= v || p.part_of(u) == p.part_of(v)) continue;
      const auto side = layout.shared_side(g.cell(v), g.cell(u));
      out << "<line x1=\"" << fixed(side[0][0]) << "\" y1=\"" << fixed(side[0][1]) << "\" x2=\""
          << fixed(side[1][0]) << "\" y2=\"" << fixed(side[1][1]) << "\"/>\n";
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace gridpart

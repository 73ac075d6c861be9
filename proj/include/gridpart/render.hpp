#pragma once

#include <string>

#include "gridpart/grid.hpp"

namespace gridpart {

struct RenderOptions {
  double cell_size = 20.0;    // square side or hexagon circumradius, in px
  bool shade_weights = false;  // darker fill for heavier cells
};

// SVG 1.1 map: one polygon per cell filled by part, thick strokes along
// part boundaries. Output is byte-stable for identical inputs.
std::string render_svg(const GridGraph& g, const Partition& p, const RenderOptions& opts = {});

}  // namespace gridpart

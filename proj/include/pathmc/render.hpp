#pragma once

#include <string>

#include "pathmc/path.hpp"

namespace pathmc {

struct RenderOptions {
  int width = 800;
  int height = 300;
  int margin = 10;
};

// Polyline rendering of a height profile, starting at the origin. Wall
// families additionally draw the wall as a horizontal segment at height h
// over [r, s]. Output bytes are deterministic for fixed input and options.
std::string render_svg(const FamilySpec& spec, const LatticePath& path,
                       const RenderOptions& opts = {});

// Character-grid rendering: one column per position 0..n, one row per height
// level between the extremes. Path points are '*', the axis row uses '-',
// wall columns are marked '=' at the wall height.
std::string render_ascii(const FamilySpec& spec, const LatticePath& path);

}  // namespace pathmc

#include "pathmc/render.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace pathmc {

namespace {

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const FamilySpec& spec, const LatticePath& path, const RenderOptions& opts) {
  const std::int64_t n = path.n();
  std::int64_t lo = 0, hi = 0;
  for (std::int64_t h : path.heights()) {
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  if (spec.kind() == FamilyKind::Wall && spec.wall_window().r <= spec.wall_window().s) {
    lo = std::min(lo, spec.wall_window().h);
    hi = std::max(hi, spec.wall_window().h);
  }
  if (hi == lo) hi = lo + 1;

  const double inner_w = opts.width - 2.0 * opts.margin;
  const double inner_h = opts.height - 2.0 * opts.margin;
  const auto x_of = [&](double i) { return opts.margin + inner_w * i / static_cast<double>(n); };
  const auto y_of = [&](double h) {
    return opts.margin + inner_h * (static_cast<double>(hi) - h) / static_cast<double>(hi - lo);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opts.width) +
         "\" height=\"" + std::to_string(opts.height) + "\">\n";
  // axis at height zero
  svg += "  <line x1=\"" + format_coord(x_of(0)) + "\" y1=\"" + format_coord(y_of(0)) +
         "\" x2=\"" + format_coord(x_of(static_cast<double>(n))) + "\" y2=\"" +
         format_coord(y_of(0)) + "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
  if (spec.kind() == FamilyKind::Wall && spec.wall_window().r <= spec.wall_window().s) {
    const auto& w = spec.wall_window();
    svg += "  <line x1=\"" + format_coord(x_of(static_cast<double>(w.r))) + "\" y1=\"" +
           format_coord(y_of(static_cast<double>(w.h))) + "\" x2=\"" +
           format_coord(x_of(static_cast<double>(w.s))) + "\" y2=\"" +
           format_coord(y_of(static_cast<double>(w.h))) +
           "\" stroke=\"#cc3333\" stroke-width=\"2\"/>\n";
  }
  svg += "  <polyline fill=\"none\" stroke=\"#2255aa\" stroke-width=\"1.5\" points=\"";
  svg += format_coord(x_of(0)) + "," + format_coord(y_of(0));
  for (std::int64_t i = 1; i <= n; ++i) {
    svg += " " + format_coord(x_of(static_cast<double>(i))) + "," +
           format_coord(y_of(static_cast<double>(path.height(i))));
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

std::string render_ascii(const FamilySpec& spec, const LatticePath& path) {
  const std::int64_t n = path.n();
  std::int64_t lo = 0, hi = 0;
  for (std::int64_t h : path.heights()) {
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  const bool has_wall = spec.kind() == FamilyKind::Wall && spec.wall_window().r <= spec.wall_window().s;
  if (has_wall) {
    lo = std::min(lo, spec.wall_window().h);
    hi = std::max(hi, spec.wall_window().h);
  }

  // Rows from the top height down to the bottom; columns 0..n.
  std::vector<std::string> grid;
  for (std::int64_t row = hi; row >= lo; --row) {
    std::string line(static_cast<std::size_t>(n + 1), row == 0 ? '-' : ' ');
    if (has_wall && row == spec.wall_window().h) {
      for (std::int64_t i = spec.wall_window().r; i <= spec.wall_window().s; ++i)
        line[static_cast<std::size_t>(i)] = '=';
    }
    for (std::int64_t i = 0; i <= n; ++i) {
      if (path.height(i) == row) line[static_cast<std::size_t>(i)] = '*';
    }
    grid.push_back(std::move(line));
  }
  std::string out;
  for (const auto& line : grid) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace pathmc

#include "mrmc/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace mrmc {

namespace {

std::string fmt(double v, const char* format = "%.4g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double metric_of(const ConfigResult& r, HeatmapMetric metric) {
  return metric == HeatmapMetric::Capacity ? r.capacity : r.report.efficiency;
}

}  // namespace

std::string render_heatmap(const std::vector<ConfigResult>& grid, HeatmapMetric metric) {
  if (grid.empty()) throw ValidationError("heatmap needs at least one cell");

  int cmin = grid[0].config.channels, cmax = cmin;
  int rmin = grid[0].config.radios, rmax = rmin;
  std::map<std::pair<int, int>, const ConfigResult*> cells;
  for (const auto& r : grid) {
    cmin = std::min(cmin, r.config.channels);
    cmax = std::max(cmax, r.config.channels);
    rmin = std::min(rmin, r.config.radios);
    rmax = std::max(rmax, r.config.radios);
    cells[{r.config.channels, r.config.radios}] = &r;
  }
  std::string missing;
  for (int c = cmin; c <= cmax; ++c)
    for (int r = rmin; r <= rmax; ++r)
      if (!cells.count({c, r}))
        missing += " (" + std::to_string(c) + "," + std::to_string(r) + ")";
  if (!missing.empty()) throw ValidationError("heatmap grid is ragged; missing cells:" + missing);

  double lo = metric_of(grid[0], metric), hi = lo;
  for (const auto& r : grid) {
    lo = std::min(lo, metric_of(r, metric));
    hi = std::max(hi, metric_of(r, metric));
  }

  const int cell_w = 72, cell_h = 44, left = 64, top = 40, bottom = 46;
  const int cols = cmax - cmin + 1, rows = rmax - rmin + 1;
  const int width = left + cols * cell_w + 16;
  const int height = top + rows * cell_h + bottom;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (left + cols * cell_w / 2) << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">"
      << (metric == HeatmapMetric::Capacity ? "capacity" : "energy efficiency") << "</text>\n";

  for (int c = cmin; c <= cmax; ++c)
    for (int r = rmin; r <= rmax; ++r) {
      const ConfigResult& cell = *cells[{c, r}];
      const double value = metric_of(cell, metric);
      const double s = hi > lo ? (value - lo) / (hi - lo) : 0.5;
      // white -> blue ramp
      const int red = static_cast<int>(std::lround(247 - s * (247 - 31)));
      const int green = static_cast<int>(std::lround(251 - s * (251 - 107)));
      const int blue = static_cast<int>(std::lround(255 - s * (255 - 177)));
      const int x = left + (c - cmin) * cell_w;
      const int y = top + (rmax - r) * cell_h;  // radios grow upward
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w << "\" height=\""
          << cell_h << "\" fill=\"rgb(" << red << "," << green << "," << blue
          << ")\" stroke=\"#888\"/>\n";
      const char* text_fill = s > 0.6 ? "white" : "black";
      svg << "<text x=\"" << (x + cell_w / 2) << "\" y=\"" << (y + cell_h / 2 + 4)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
          << text_fill << "\">" << fmt(value) << "</text>\n";
    }

  for (int c = cmin; c <= cmax; ++c)
    svg << "<text x=\"" << (left + (c - cmin) * cell_w + cell_w / 2) << "\" y=\""
        << (top + rows * cell_h + 18) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << c << "</text>\n";
  for (int r = rmin; r <= rmax; ++r)
    svg << "<text x=\"" << (left - 10) << "\" y=\"" << (top + (rmax - r) * cell_h + cell_h / 2 + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << r
        << "</text>\n";

  svg << "<text x=\"" << (left + cols * cell_w / 2) << "\" y=\"" << (height - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">channels</text>\n";
  svg << "<text x=\"16\" y=\"" << (top + rows * cell_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << (top + rows * cell_h / 2) << ")\">radios</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mrmc

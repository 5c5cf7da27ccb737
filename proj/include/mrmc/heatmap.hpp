#pragma once

#include <string>
#include <vector>

#include "mrmc/sweep.hpp"

namespace mrmc {

enum class HeatmapMetric { Capacity, Efficiency };

/// Deterministic SVG heatmap of a complete rectangular sweep grid: one rect
/// per (channels, radios) cell, linear color scale, numeric cell labels.
/// Throws ValidationError listing the missing cells for a ragged grid.
std::string render_heatmap(const std::vector<ConfigResult>& grid, HeatmapMetric metric);

}  // namespace mrmc

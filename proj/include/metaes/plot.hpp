#pragma once

#include "metaes/report_io.hpp"

#include <string>
#include <vector>

namespace metaes::plot {

inline constexpr double kClipThreshold = 1e-10;

struct Series {
  std::string label;
  std::vector<io::TraceRow> rows;
};

enum class XAxis { evaluations, wall_seconds };

/// Standalone SVG: one polyline per series, log10 cost axis. Costs at or
/// below the clip threshold are drawn at the threshold and the legend says so.
std::string render_svg(const std::vector<Series>& series, XAxis x_axis = XAxis::evaluations);

}  // namespace metaes::plot

#include "metaes/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace metaes::plot {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 220.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double clipped_log(double f) {
  if (!(f > kClipThreshold) || std::isnan(f)) return std::log10(kClipThreshold);
  return std::log10(f);
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, XAxis x_axis) {
  const auto x_of = [&](const io::TraceRow& r) {
    return x_axis == XAxis::evaluations ? static_cast<double>(r.evals) : r.wall_s;
  };

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  bool clipped = false;
  for (const Series& s : series) {
    for (const io::TraceRow& r : s.rows) {
      if (!std::isfinite(r.best_f)) continue;
      x_min = std::min(x_min, x_of(r));
      x_max = std::max(x_max, x_of(r));
      const double y = clipped_log(r.best_f);
      clipped = clipped || !(r.best_f > kClipThreshold);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!std::isfinite(x_min)) x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  if (x_max <= x_min) x_max = x_min + 1.0;
  y_min = std::floor(y_min);
  y_max = std::ceil(y_max);
  if (y_max <= y_min) y_max = y_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int decades = static_cast<int>(y_max - y_min);
  const int step = std::max(1, decades / 10);
  for (int e = static_cast<int>(y_min); e <= static_cast<int>(y_max); e += step) {
    const double y = py(e);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double x = x_min + (x_max - x_min) * k / 4.0;
    svg << "<text x=\"" << px(x) << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">" << x
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << (x_axis == XAxis::evaluations ? "function evaluations" : "wall-clock seconds") << "</text>\n";
  svg << "<text transform=\"translate(20," << kTop + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">best cost (log scale)</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % kColors.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const io::TraceRow& r : series[i].rows) {
      if (!std::isfinite(r.best_f)) continue;
      svg << (first ? "" : " ") << px(x_of(r)) << ',' << py(clipped_log(r.best_f));
      first = false;
    }
    svg << "\"><title>" << escape(series[i].label) << "</title></polyline>\n";

    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    const double lx = kLeft + plot_w + 15;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly << "\" stroke=\""
        << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\">" << escape(series[i].label) << "</text>\n";
  }
  const double note_y = kTop + 10 + 18.0 * static_cast<double>(series.size()) + 10;
  svg << "<text x=\"" << kLeft + plot_w + 15 << "\" y=\"" << note_y << "\" font-size=\"10\">costs &lt;= 1e-10 "
      << (clipped ? "clipped" : "would be clipped") << " to 1e-10</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace metaes::plot

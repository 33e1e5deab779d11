#pragma once

// Self-contained SVG 1.1 charts. Output bytes depend only on the input.

#include <string>
#include <vector>

namespace gcm::app {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Throws std::invalid_argument when there is no point to draw.
std::string render_line_chart(const LineChart& chart);

struct Heatmap {
  std::string x_label;
  std::string y_label;
  std::vector<double> x;  // columns
  std::vector<double> y;  // rows
  std::vector<double> z;  // row-major, y.size() * x.size()
  std::string z_label;
};

/// Cells with z <= zero_level are drawn white, the rest on a log colour scale.
std::string render_heatmap(const Heatmap& map, double zero_level);

}  // namespace gcm::app

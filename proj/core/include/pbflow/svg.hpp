#pragma once

#include <string>
#include <vector>

namespace pbflow {

// Minimal standalone SVG line chart, log-log or linear axes. One series per
// entry; emitted files are self-contained.
struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

struct SvgChartOptions {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  int width = 640, height = 420;
};

void write_svg_chart(const std::string& path, const std::vector<SvgSeries>& series,
                     const SvgChartOptions& opt);

}  // namespace pbflow

#pragma once

#include <string>
#include <vector>

namespace sqrbm {

struct Series {
  std::string label;
  std::vector<double> y;  // x = 1, 2, ...
};

/// Static SVG line chart with a log10 y axis. Non-positive values are clipped
/// to the smallest positive value present.
std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

}  // namespace sqrbm

#include "sqrbm/plot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sqrbm {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kLeft = 80;
constexpr double kRight = 180;
constexpr double kTop = 40;
constexpr double kBottom = 60;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::size_t max_len = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& s : series) {
    max_len = std::max(max_len, s.y.size());
    for (double y : s.y) {
      if (y > 0.0 && std::isfinite(y)) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
  }
  const bool has_data = hi > 0.0;
  double decade_lo = has_data ? std::floor(std::log10(lo)) : -1.0;
  double decade_hi = has_data ? std::ceil(std::log10(hi)) : 0.0;
  if (decade_hi <= decade_lo) decade_hi = decade_lo + 1.0;
  const double x_max = std::max<double>(2.0, static_cast<double>(max_len));

  auto px = [&](double x) { return kLeft + (x - 1.0) / (x_max - 1.0) * plot_w; };
  auto py = [&](double y) {
    const double ly = std::log10(std::max(y, lo));
    return kTop + (decade_hi - ly) / (decade_hi - decade_lo) * plot_h;
  };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth,
                     kHeight);
  svg += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     kLeft + plot_w / 2, escape(title));

  // Decade gridlines and labels.
  for (double d = decade_lo; d <= decade_hi + 0.5; d += 1.0) {
    const double y = kTop + (decade_hi - d) / (decade_hi - decade_lo) * plot_h;
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n",
        kLeft, y, kLeft + plot_w, y);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">1e{}</text>\n",
                       kLeft - 6, y + 4, static_cast<int>(d));
  }
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
      kLeft, kTop, plot_w, plot_h);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"start\">1</text>\n", kLeft,
                     kTop + plot_h + 16);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n",
                     kLeft + plot_w, kTop + plot_h + 16, static_cast<long>(x_max));
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + plot_w / 2, kHeight - 16, escape(x_label));
  svg += fmt::format(
      "<text x=\"18\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2f})\">{}"
      "</text>\n",
      kTop + plot_h / 2, kTop + plot_h / 2, escape(y_label));

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % kPalette.size()];
    if (has_data && !s.y.empty()) {
      std::string points;
      for (std::size_t i = 0; i < s.y.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        points += fmt::format("{:.2f},{:.2f} ", px(static_cast<double>(i + 1)), py(s.y[i]));
      }
      svg += fmt::format(
          "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
          points);
    }
    const double ly = kTop + 10 + 18 * static_cast<double>(k);
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
        "stroke-width=\"2\"/>\n",
        kLeft + plot_w + 12, ly, kLeft + plot_w + 36, ly, color);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", kLeft + plot_w + 42, ly + 4,
                       escape(s.label));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sqrbm

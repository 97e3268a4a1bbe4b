#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace geod::bench {

/// A line chart with optional log10 axes. Points that are non-finite, or
/// nonpositive on a log axis, break the polyline.
struct Plot {
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
  };

  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

namespace detail {

inline constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                        "#9467bd", "#8c564b", "#e377c2", "#17becf"};

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] std::optional<double> map(double v) const {
    if (!std::isfinite(v) || (log && v <= 0.0)) return std::nullopt;
    return log ? std::log10(v) : v;
  }

  void fit(const std::vector<double>& mapped) {
    if (mapped.empty()) return;
    lo = *std::min_element(mapped.begin(), mapped.end());
    hi = *std::max_element(mapped.begin(), mapped.end());
    if (log) {
      lo = std::floor(lo);
      hi = std::ceil(hi);
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }

  [[nodiscard]] std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 10.0)));
      for (double t = lo; t <= hi + 1e-9; t += step) out.push_back(t);
      return out;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
      step = m * mag;
      if (step >= raw) break;
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(t);
    return out;
  }

  [[nodiscard]] std::string label(double t) const {
    if (log) return fmt::format("1e{}", static_cast<int>(std::lround(t)));
    if (std::abs(t) < 1e-12) return "0";
    return fmt::format("{:g}", t);
  }
};

}  // namespace detail

/// Renders `plot` as a standalone SVG document. Output depends only on the
/// plot contents.
inline std::string render_svg(const Plot& plot) {
  constexpr double width = 720.0;
  constexpr double height = 440.0;
  constexpr double left = 80.0;
  constexpr double right = 170.0;
  constexpr double top = 40.0;
  constexpr double bottom = 60.0;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  detail::Axis ax{plot.log_x};
  detail::Axis ay{plot.log_y};
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : plot.series) {
    for (const auto& [x, y] : s.points) {
      const auto mx = ax.map(x);
      const auto my = ay.map(y);
      if (mx && my) {
        xs.push_back(*mx);
        ys.push_back(*my);
      }
    }
  }
  ax.fit(xs);
  ay.fit(ys);
  auto px = [&](double v) { return left + (v - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return top + ph - (v - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  out += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
  out += fmt::format("<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     left + pw / 2, detail::xml_escape(plot.title));
  out += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      left, top, pw, ph);

  for (const double t : ax.ticks()) {
    const double x = px(t);
    out += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n", x,
        top, x, top + ph);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x,
                       top + ph + 16, ax.label(t));
  }
  for (const double t : ay.ticks()) {
    const double y = py(t);
    out += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n", left,
        y, left + pw, y);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n",
                       left - 6, y + 4, ay.label(t));
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, height - 18, detail::xml_escape(plot.x_label));
  out += fmt::format(
      "<text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1f})\">{}"
      "</text>\n",
      top + ph / 2, top + ph / 2, detail::xml_escape(plot.y_label));

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    const char* color = detail::kPalette[si % detail::kPalette.size()];
    std::string points;
    auto flush = [&]() {
      if (!points.empty()) {
        out += fmt::format(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
            points);
        points.clear();
      }
    };
    for (const auto& [x, y] : s.points) {
      const auto mx = ax.map(x);
      const auto my = ay.map(y);
      if (!mx || !my) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", px(*mx), py(*my));
    }
    flush();
    const double ly = top + 14 + 18 * static_cast<double>(si);
    out += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" "
        "stroke-width=\"2\"/>\n",
        left + pw + 12, ly, left + pw + 36, ly, color);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", left + pw + 42, ly + 4,
                       detail::xml_escape(s.name));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace geod::bench

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "recaudit/errors.hpp"
#include "recaudit/pipeline.hpp"

namespace recaudit {

namespace {

constexpr double kWidth = 960, kHeight = 540;
constexpr double kLeft = 70, kRight = 790, kTop = 44, kBottom = 470;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

// Fixed one-decimal coordinates keep the output byte-stable.
std::string coord(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 1);
  return std::string(buf, end);
}

std::string tick_label(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 4);
  return std::string(buf, end);
}

std::string chart_filename(const std::string& metric) {
  std::string name = "chart_";
  for (char c : metric) {
    if (c == '@')
      name += "_at_";
    else
      name += c;
  }
  return name + ".svg";
}

struct SeriesPoints {
  std::vector<std::pair<size_t, double>> pts;  // (window index, value)
};

std::string render_chart(const std::string& metric, const std::vector<std::string>& windows,
                         const std::map<std::string, SeriesPoints>& by_series) {
  double lo = 0, hi = 0;
  bool first = true;
  for (const auto& [series, sp] : by_series)
    for (const auto& [w, v] : sp.pts) {
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  if (first) {
    lo = 0;
    hi = 1;
  }
  if (hi - lo < 1e-12) {
    double pad = std::abs(hi) > 1e-12 ? std::abs(hi) * 0.1 : 0.5;
    lo -= pad;
    hi += pad;
  } else {
    double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }

  size_t n = windows.size();
  auto x_of = [&](size_t w) {
    if (n <= 1) return (kLeft + kRight) / 2;
    return kLeft + (kRight - kLeft) * static_cast<double>(w) / static_cast<double>(n - 1);
  };
  auto y_of = [&](double v) { return kBottom - (kBottom - kTop) * (v - lo) / (hi - lo); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
         coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + coord((kLeft + kRight) / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         metric + "</text>\n";

  // Axes.
  svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kBottom) + "\" x2=\"" + coord(kRight) +
         "\" y2=\"" + coord(kBottom) + "\" stroke=\"#333333\"/>\n";
  svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop) + "\" x2=\"" + coord(kLeft) +
         "\" y2=\"" + coord(kBottom) + "\" stroke=\"#333333\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    double v = lo + (hi - lo) * t / 4.0;
    double y = y_of(v);
    svg += "<line x1=\"" + coord(kLeft - 4) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(kLeft) +
           "\" y2=\"" + coord(y) + "\" stroke=\"#333333\"/>\n";
    svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(kRight) +
           "\" y2=\"" + coord(y) + "\" stroke=\"#e0e0e0\"/>\n";
    svg += "<text x=\"" + coord(kLeft - 8) + "\" y=\"" + coord(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(v) +
           "</text>\n";
  }

  size_t step = n <= 16 ? 1 : (n + 15) / 16;
  for (size_t w = 0; w < n; w += step) {
    double x = x_of(w);
    svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(kBottom) + "\" x2=\"" + coord(x) +
           "\" y2=\"" + coord(kBottom + 4) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + coord(x) + "\" y=\"" + coord(kBottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + windows[w] +
           "</text>\n";
  }
  svg += "<text x=\"" + coord((kLeft + kRight) / 2) + "\" y=\"" + coord(kHeight - 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">window</text>\n";
  svg += "<text x=\"20\" y=\"" + coord((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 20 " +
         coord((kTop + kBottom) / 2) + ")\">" + metric + "</text>\n";

  size_t color = 0;
  double legend_y = kTop + 8;
  for (const auto& [series, sp] : by_series) {
    const char* stroke = kPalette[color % kPaletteSize];
    ++color;
    if (sp.pts.size() > 1) {
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += stroke;
      svg += "\" stroke-width=\"2\" points=\"";
      bool lead = true;
      for (const auto& [w, v] : sp.pts) {
        if (!lead) svg += ' ';
        lead = false;
        svg += coord(x_of(w)) + "," + coord(y_of(v));
      }
      svg += "\"/>\n";
    }
    for (const auto& [w, v] : sp.pts)
      svg += "<circle cx=\"" + coord(x_of(w)) + "\" cy=\"" + coord(y_of(v)) + "\" r=\"2.5\" fill=\"" +
             stroke + "\"/>\n";

    svg += "<line x1=\"" + coord(kRight + 12) + "\" y1=\"" + coord(legend_y) + "\" x2=\"" +
           coord(kRight + 34) + "\" y2=\"" + coord(legend_y) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + coord(kRight + 40) + "\" y=\"" + coord(legend_y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + series + "</text>\n";
    legend_y += 18;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

void emit_charts(const MetricTable& table, const std::string& dir) {
  if (table.empty()) throw ConfigError("charts: metric table is empty");
  std::filesystem::create_directories(dir);

  std::vector<std::string> windows;
  for (const auto& row : table) windows.push_back(row.window);
  std::sort(windows.begin(), windows.end());
  windows.erase(std::unique(windows.begin(), windows.end()), windows.end());
  std::map<std::string, size_t> window_index;
  for (size_t i = 0; i < windows.size(); ++i) window_index.emplace(windows[i], i);

  std::map<std::string, std::map<std::string, SeriesPoints>> by_metric;
  for (const auto& row : table)
    by_metric[row.metric][row.series].pts.emplace_back(window_index.at(row.window), row.value);
  for (auto& [metric, by_series] : by_metric)
    for (auto& [series, sp] : by_series)
      std::sort(sp.pts.begin(), sp.pts.end());

  for (const auto& [metric, by_series] : by_metric) {
    std::string svg = render_chart(metric, windows, by_series);
    std::filesystem::path path = std::filesystem::path(dir) / chart_filename(metric);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << svg;
    if (!f) throw Error("write failed for " + path.string());
  }
}

}  // namespace recaudit

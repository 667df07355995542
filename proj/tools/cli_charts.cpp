#include "cli_charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cli_config.hpp"
#include "cli_runtime.hpp"

namespace cli {

namespace {

constexpr double kPanelW = 300.0, kPanelH = 250.0;
constexpr double kMarginL = 55.0, kMarginT = 50.0, kPanelGap = 45.0, kLegendW = 150.0;
constexpr double kMarginB = 45.0;

std::string color_for(const std::string& method) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  const auto& known = known_methods();
  const auto it = std::find(known.begin(), known.end(), method);
  if (it == known.end()) return "#7f7f7f";
  return palette[(it - known.begin()) % 6];
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

} // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<int>& regions, const std::vector<chart_series>& series) {
  const size_t nx = regions.size();
  if (nx == 0) throw run_error("chart needs at least one region");

  const double width = kMarginL + 2 * kPanelW + kPanelGap + kLegendW + 20.0;
  const double height = kMarginT + kPanelH + kMarginB;
  const auto panel_x0 = [&](int kind) { return kMarginL + kind * (kPanelW + kPanelGap); };
  const auto x_of = [&](int kind, size_t i) {
    const double step = nx > 1 ? kPanelW / static_cast<double>(nx - 1) : 0.0;
    return panel_x0(kind) + (nx > 1 ? step * static_cast<double>(i) : kPanelW / 2);
  };
  const auto y_of = [&](double score) { return kMarginT + kPanelH * (1.0 - score); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (kMarginL + kPanelW + kPanelGap / 2) << "\" y=\"22\" font-size=\"16\" "
         "font-family=\"sans-serif\" text-anchor=\"middle\">"
      << title << "</text>\n";

  for (int kind = 0; kind < 2; ++kind) {
    const double x0 = panel_x0(kind);
    svg << "<text x=\"" << (x0 + kPanelW / 2) << "\" y=\"" << (kMarginT - 8)
        << "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\">"
        << (kind == 0 ? "punctual" : "gaussian") << "</text>\n";
    svg << "<rect x=\"" << x0 << "\" y=\"" << kMarginT << "\" width=\"" << kPanelW
        << "\" height=\"" << kPanelH << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double y = y_of(tick);
      svg << "<line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << (x0 + kPanelW) << "\" y2=\""
          << y << "\" stroke=\"#ddd\"/>\n";
      if (kind == 0)
        svg << "<text x=\"" << (x0 - 6) << "\" y=\"" << (y + 4)
            << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">" << num(tick)
            << "</text>\n";
    }
    for (size_t i = 0; i < nx; ++i) {
      svg << "<text x=\"" << x_of(kind, i) << "\" y=\"" << (kMarginT + kPanelH + 16)
          << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\">roi"
          << regions[i] << "</text>\n";
    }
    svg << "<text x=\"" << (x0 + kPanelW / 2) << "\" y=\"" << (kMarginT + kPanelH + 34)
        << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">region</text>\n";
  }

  for (const chart_series& s : series) {
    if (s.values.size() != nx) throw run_error("chart series length does not match the regions");
    const std::string color = color_for(s.method);
    const bool starred = s.snr > 0.0;
    std::string points;
    const auto flush = [&] {
      if (points.empty()) return;
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\""
          << (starred ? " stroke-dasharray=\"5,3\"" : "") << " points=\"" << points << "\"/>\n";
      points.clear();
    };
    for (size_t i = 0; i < nx; ++i) {
      if (!std::isfinite(s.values[i])) {
        flush();  // break the line at missing points
        continue;
      }
      const double x = x_of(s.kind, i), y = y_of(std::clamp(s.values[i], 0.0, 1.0));
      points += num(x) + "," + num(y) + " ";
      if (starred)
        svg << "<text x=\"" << x << "\" y=\"" << (y + 4.5) << "\" font-size=\"14\" fill=\""
            << color << "\" text-anchor=\"middle\">*</text>\n";
      else
        svg << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"2.6\" fill=\"" << color
            << "\"/>\n";
    }
    flush();
  }

  // legend: unique (method, starred) pairs in first-appearance order
  double ly = kMarginT + 4;
  const double lx = kMarginL + 2 * kPanelW + kPanelGap + 18;
  std::vector<std::string> seen;
  for (const chart_series& s : series) {
    const std::string entry = s.method + (s.snr > 0.0 ? "*" : "");
    if (std::find(seen.begin(), seen.end(), entry) != seen.end()) continue;
    seen.push_back(entry);
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << (lx + 22) << "\" y2=\"" << ly
        << "\" stroke=\"" << color_for(s.method) << "\" stroke-width=\"1.6\""
        << (s.snr > 0.0 ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    svg << "<text x=\"" << (lx + 28) << "\" y=\"" << (ly + 4)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << entry << "</text>\n";
    ly += 16;
  }

  svg << "</svg>\n";
  std::ofstream out(path);
  if (!out.good()) throw run_error("cannot write chart: " + path);
  out << svg.str();
  if (!out.good()) throw run_error("chart write failed: " + path);
}

} // namespace cli

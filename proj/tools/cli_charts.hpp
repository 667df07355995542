#pragma once

#include <string>
#include <vector>

namespace cli {

/// One line on a score chart: mean score per region for a (method, snr)
/// combination within one source-kind panel. NaN marks a missing point.
struct chart_series {
  std::string method;
  double snr = 0.0;  // 0 = noiseless; positive series are starred
  int kind = 0;      // panel: 0 punctual, 1 gaussian
  std::vector<double> values;  // one per region, region order
};

/// Two-panel SVG line chart (punctual | gaussian), one line per series,
/// y axis fixed to [0, 1], x axis the region indices. Noisy series are drawn
/// dashed with star markers.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<int>& regions, const std::vector<chart_series>& series);

} // namespace cli

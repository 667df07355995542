#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cli_commands.hpp"
#include "cli_runtime.hpp"

namespace cli {

namespace {

struct csv_row {
  std::string method;
  int region = -1;
  std::string kind;
  double snr = 0.0;
  double scores[3] = {0.0, 0.0, 0.0};  // le, vis, sr
};

constexpr const char* kMetricNames[3] = {"localization", "visibility", "spatial_resolution"};

double parse_num(const std::string& cell, const std::string& path) {
  try {
    size_t used = 0;
    const double x = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return x;
  } catch (const std::exception&) {
    throw run_error(path + ": unparseable number '" + cell + "'");
  }
}

std::vector<csv_row> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw run_error("cannot open " + path + " (run `eegsl bench` first)");
  std::string line;
  if (!std::getline(in, line)) throw run_error(path + ": empty file");
  if (line != "method,region,kind,snr,seed,le_score,vis_score,sr_score,runtime_ms")
    throw run_error(path + ": unexpected header '" + line + "'");
  std::vector<csv_row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw run_error(path + ": malformed row '" + line + "'");
    csv_row row;
    row.method = cells[0];
    row.region = static_cast<int>(parse_num(cells[1], path));
    row.kind = cells[2];
    row.snr = parse_num(cells[3], path);
    for (int s = 0; s < 3; ++s) row.scores[s] = parse_num(cells[5 + static_cast<size_t>(s)], path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw run_error(path + ": no data rows");
  return rows;
}

struct accumulator {
  double sum = 0.0;
  int count = 0;
  void add(double x) {
    if (!std::isfinite(x)) return;  // failed rows do not poison the means
    sum += x;
    ++count;
  }
  double mean() const {
    return count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
  }
};

/// Per (method, metric): overall noiseless/noisy means, and the degradation
/// mean_noiseless - mean_noisy computed overall ("mean") and as the maximum
/// over (region, kind) scenario groups ("max").
struct method_summary {
  double noiseless[3], noisy[3], mean_degradation[3], max_degradation[3];
};

std::map<std::string, method_summary> summarize(const std::vector<csv_row>& rows) {
  std::map<std::string, method_summary> out;
  std::vector<std::string> methods;
  for (const csv_row& row : rows)
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
      methods.push_back(row.method);

  for (const std::string& method : methods) {
    method_summary ms{};
    for (int s = 0; s < 3; ++s) {
      accumulator clean, noisy;
      std::map<std::pair<int, std::string>, std::pair<accumulator, accumulator>> groups;
      for (const csv_row& row : rows) {
        if (row.method != method) continue;
        auto& group = groups[{row.region, row.kind}];
        if (row.snr == 0.0) {
          clean.add(row.scores[s]);
          group.first.add(row.scores[s]);
        } else {
          noisy.add(row.scores[s]);
          group.second.add(row.scores[s]);
        }
      }
      ms.noiseless[s] = clean.mean();
      ms.noisy[s] = noisy.mean();
      ms.mean_degradation[s] = clean.mean() - noisy.mean();
      double worst = -std::numeric_limits<double>::infinity();
      for (const auto& [key, group] : groups) {
        const double d = group.first.mean() - group.second.mean();
        if (std::isfinite(d)) worst = std::max(worst, d);
      }
      ms.max_degradation[s] =
          std::isfinite(worst) ? worst : std::numeric_limits<double>::quiet_NaN();
    }
    out[method] = ms;
  }
  return out;
}

std::string fmt4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

} // namespace

int cmd_report(const run_config& config) {
  const std::filesystem::path out_dir(config.out_dir);
  const std::string csv_path = (out_dir / "results.csv").string();
  const std::vector<csv_row> rows = read_results(csv_path);
  const auto summary = summarize(rows);

  std::ostringstream md;
  md << "# benchmark summary\n\n";
  md << rows.size() << " rows from " << csv_path << "\n";
  for (int s = 0; s < 3; ++s) {
    md << "\n## " << kMetricNames[s] << " score\n\n";
    md << "| method | noiseless mean | noisy mean | mean degradation | max degradation |\n";
    md << "|---|---|---|---|---|\n";
    for (const auto& [method, ms] : summary) {
      md << "| " << method << " | " << fmt4(ms.noiseless[s]) << " | " << fmt4(ms.noisy[s])
         << " | " << fmt4(ms.mean_degradation[s]) << " | " << fmt4(ms.max_degradation[s])
         << " |\n";
    }
  }
  md << "\nDegradation is score(snr=0) minus score(snr>0); max is over (region, kind) groups.\n";

  const std::string md_path = (out_dir / "summary.md").string();
  {
    std::ofstream out(md_path);
    if (!out.good()) throw run_error("cannot write " + md_path);
    out << md.str();
    if (!out.good()) throw run_error("write failed for " + md_path);
  }

  nlohmann::json jsum;
  jsum["row_count"] = rows.size();
  for (int s = 0; s < 3; ++s) {
    nlohmann::json per_method;
    for (const auto& [method, ms] : summary) {
      per_method[method] = {{"noiseless_mean", ms.noiseless[s]},
                            {"noisy_mean", ms.noisy[s]},
                            {"mean_degradation", ms.mean_degradation[s]},
                            {"max_degradation", ms.max_degradation[s]}};
    }
    jsum["metrics"][kMetricNames[s]] = std::move(per_method);
  }
  const std::string json_path = (out_dir / "summary.json").string();
  {
    std::ofstream out(json_path);
    if (!out.good()) throw run_error("cannot write " + json_path);
    out << jsum.dump(2) << "\n";
    if (!out.good()) throw run_error("write failed for " + json_path);
  }

  std::cout << md.str() << "\nwrote " << md_path << "\nwrote " << json_path << "\n";
  return 0;
}

} // namespace cli

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "cli_commands.hpp"
#include "cli_runtime.hpp"

namespace cli {

int cmd_solve(const run_config& config, const std::string& scenario_label,
              const std::string& method, std::optional<std::uint64_t> seed) {
  if (method.empty()) throw config_error("solve requires --method");
  if (scenario_label.empty()) throw config_error("solve requires --scenario");
  const auto& known = known_methods();
  if (std::find(known.begin(), known.end(), method) == known.end()) {
    std::string names;
    for (const std::string& m : known) names += (names.empty() ? "" : ", ") + m;
    throw config_error("unknown method '" + method + "' (known: " + names + ")");
  }

  workspace ws = build_geometry(config);
  load_suite_dir(ws, suite_dir(config));
  const auto scen_it =
      std::find_if(ws.scenarios.begin(), ws.scenarios.end(),
                   [&](const scenario_info& s) { return s.label == scenario_label; });
  if (scen_it == ws.scenarios.end()) {
    std::string labels;
    for (const scenario_info& s : ws.scenarios) labels += "\n  " + s.label;
    throw config_error("unknown scenario '" + scenario_label + "'; available:" + labels);
  }
  const scenario_info& scen = *scen_it;

  const std::uint64_t run_seed =
      seed ? *seed : row_seed(config.bench_seed, method, scen.label, 0);
  const std::filesystem::path sol_dir = std::filesystem::path(config.out_dir) / "solutions";
  std::filesystem::create_directories(sol_dir);
  const std::string stem = scen.label + "." + method;
  const std::string telemetry_path =
      is_moeaar_method(method) ? (sol_dir / (stem + ".telemetry.csv")).string() : std::string();
  if (!telemetry_path.empty()) std::filesystem::remove(telemetry_path);

  const solve_output out = solve_scenario(ws, config, scen.index, method, run_seed,
                                          telemetry_path);

  const std::string j_path = (sol_dir / (stem + ".csv")).string();
  std::ofstream jf(j_path);
  if (!jf.good()) throw run_error("cannot write " + j_path);
  for (double x : out.j) jf << fmt_g17(x) << "\n";
  if (!jf.good()) throw run_error("write failed for " + j_path);

  nlohmann::json trace;
  trace["scenario"] = scen.label;
  trace["method"] = method;
  trace["seed"] = run_seed;
  trace["runtime_ms"] = out.runtime_ms;
  trace["metrics"] = {{"localization", out.metrics.localization_score},
                      {"visibility", out.metrics.visibility_score},
                      {"spatial_resolution", out.metrics.spatial_resolution_score},
                      {"raw_distance", out.metrics.raw_distance}};
  if (out.is_moeaar) {
    trace["decision"] = {{"front_size", out.report.front_size},
                         {"chosen_roi", out.report.chosen_roi},
                         {"knee_f0", out.report.knee_f0},
                         {"knee_f1", out.report.knee_f1},
                         {"cycles_run", out.report.cycles_run}};
    if (!telemetry_path.empty()) trace["telemetry"] = telemetry_path;
  } else {
    trace["lambdas"] = {out.lambda1, out.lambda2};
  }
  const std::string trace_path = (sol_dir / (stem + ".json")).string();
  std::ofstream tf(trace_path);
  if (!tf.good()) throw run_error("cannot write " + trace_path);
  tf << trace.dump(2) << "\n";
  if (!tf.good()) throw run_error("write failed for " + trace_path);

  std::cout << scen.label << " " << method << " seed=" << run_seed
            << " le=" << fmt_g17(out.metrics.localization_score)
            << " vis=" << fmt_g17(out.metrics.visibility_score)
            << " sr=" << fmt_g17(out.metrics.spatial_resolution_score) << " runtime_ms="
            << out.runtime_ms << "\n"
            << "wrote " << j_path << "\n"
            << "wrote " << trace_path << "\n";
  if (!telemetry_path.empty()) std::cout << "wrote " << telemetry_path << "\n";
  return 0;
}

} // namespace cli

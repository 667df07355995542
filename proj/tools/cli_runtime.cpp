#include "cli_runtime.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>

namespace cli {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

eegsl_head_params head_params(const run_config& config) {
  eegsl_head_params params{};
  for (int i = 0; i < 3; ++i) {
    params.radii[i] = config.radii[static_cast<size_t>(i)];
    params.conductivities[i] = config.conductivities[static_cast<size_t>(i)];
  }
  params.series_terms = config.series_terms;
  params.series_tol = config.series_tol;
  return params;
}

void cache_scenarios(workspace& ws) {
  const int n = eegsl_space_size(ws.space.get());
  const int m = eegsl_sensors_size(ws.sensors.get());
  const int count = eegsl_suite_size(ws.suite.get());
  ws.scenarios.clear();
  ws.scenarios.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    scenario_info info;
    info.index = i;
    char label[128];
    check_status(eegsl_scenario_label(ws.suite.get(), i, label, sizeof label), "scenario label");
    info.label = label;
    check_status(eegsl_scenario_meta(ws.suite.get(), i, &info.roi, &info.kind, &info.snr,
                                     &info.noise_seed),
                 "scenario metadata");
    info.j_true.resize(static_cast<size_t>(n));
    info.v.resize(static_cast<size_t>(m));
    check_status(eegsl_scenario_truth(ws.suite.get(), i, info.j_true.data(), n), "scenario truth");
    check_status(eegsl_scenario_recording(ws.suite.get(), i, info.v.data(), m),
                 "scenario recording");
    ws.scenarios.push_back(std::move(info));
  }
}

} // namespace

void check_status(eegsl_status status, const std::string& what) {
  if (status != EEGSL_OK) throw run_error(what + ": " + eegsl_last_error());
}

workspace build_geometry(const run_config& config) {
  workspace ws;
  eegsl_space* space = nullptr;
  check_status(eegsl_space_create(config.sources, config.r_cortex, config.rois, config.space_seed,
                                  &space),
               "building the source space");
  ws.space.reset(space);

  eegsl_sensors* sensors = nullptr;
  check_status(eegsl_sensors_create(config.sensor_count, &sensors), "building the montage");
  ws.sensors.reset(sensors);

  const eegsl_head_params params = head_params(config);
  eegsl_leadfield* lf = nullptr;
  check_status(eegsl_leadfield_compute(ws.space.get(), ws.sensors.get(), &params, &lf),
               "computing the lead field");
  ws.leadfield.reset(lf);
  return ws;
}

void build_suite(workspace& ws, const run_config& config) {
  eegsl_suite* suite = nullptr;
  check_status(eegsl_suite_build(ws.space.get(), ws.leadfield.get(), config.regions.data(),
                                 config.suite_seed, &suite),
               "building the scenario suite");
  ws.suite.reset(suite);
  cache_scenarios(ws);
}

void load_suite_dir(workspace& ws, const std::string& dir) {
  if (!std::filesystem::exists(std::filesystem::path(dir) / "manifest.json"))
    throw run_error("no suite found at " + dir + " (run `eegsl simulate` first)");
  eegsl_suite* suite = nullptr;
  check_status(eegsl_suite_load(dir.c_str(), &suite), "loading the scenario suite");
  ws.suite.reset(suite);
  cache_scenarios(ws);
}

std::string suite_dir(const run_config& config) {
  return (std::filesystem::path(config.out_dir) / "suite").string();
}

bool is_moeaar_method(const std::string& method) { return method.rfind("moeaar-", 0) == 0; }

solve_output solve_scenario(const workspace& ws, const run_config& config, int scenario_index,
                            const std::string& method, std::uint64_t seed,
                            const std::string& telemetry_path) {
  const scenario_info& scen = ws.scenarios.at(static_cast<size_t>(scenario_index));
  const int n = eegsl_space_size(ws.space.get());
  const int m = static_cast<int>(scen.v.size());

  solve_output out;
  out.j.resize(static_cast<size_t>(n));
  const auto start = std::chrono::steady_clock::now();

  if (is_moeaar_method(method)) {
    out.is_moeaar = true;
    const std::string penalty = method == "moeaar-l0"   ? "l0"
                                : method == "moeaar-l1" ? "l1"
                                                        : "l2L";
    eegsl_moeaar_options options{};
    eegsl_moeaar_options_default(&options);
    options.iterations = config.iterations;
    options.crossover_fraction = config.crossover_fraction;
    options.mutation_fraction = config.mutation_fraction;
    options.seed = seed;
    options.sigma0_factor = config.sigma0_factor;
    options.clamp_factor = config.clamp_factor;
    options.ls_max_iter = config.ls_max_iter;
    options.ls_tol = config.ls_tol;
    options.telemetry_path = telemetry_path.empty() ? nullptr : telemetry_path.c_str();
    check_status(eegsl_solve_moeaar(ws.leadfield.get(), ws.space.get(), scen.v.data(), m,
                                    penalty.c_str(), &options, out.j.data(), n, &out.report),
                 method + " on " + scen.label);
  } else {
    double lambdas[2] = {0.0, 0.0};
    check_status(eegsl_solve_classic(ws.leadfield.get(), ws.space.get(), scen.v.data(), m,
                                     method.c_str(), config.grid_points, config.classic_tol,
                                     config.classic_max_iter, out.j.data(), n, lambdas),
                 method + " on " + scen.label);
    out.lambda1 = lambdas[0];
    out.lambda2 = lambdas[1];
  }

  const auto stop = std::chrono::steady_clock::now();
  out.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  check_status(eegsl_metrics(ws.space.get(), scen.j_true.data(), out.j.data(), n, &out.metrics),
               "scoring " + scen.label);
  return out;
}

std::uint64_t row_seed(std::uint64_t bench_seed, const std::string& method,
                       const std::string& label, int rep) {
  const std::string key = method + "|" + label + "|" + std::to_string(rep);
  return splitmix64(bench_seed ^ fnv1a(key));
}

std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace cli

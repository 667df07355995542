#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli_config.hpp"
#include "eegsl.h"

namespace cli {

/// Raised for failures inside a run (solver errors, I/O). Maps to exit code 1.
struct run_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct space_deleter {
  void operator()(eegsl_space* p) const { eegsl_space_destroy(p); }
};
struct sensors_deleter {
  void operator()(eegsl_sensors* p) const { eegsl_sensors_destroy(p); }
};
struct leadfield_deleter {
  void operator()(eegsl_leadfield* p) const { eegsl_leadfield_destroy(p); }
};
struct suite_deleter {
  void operator()(eegsl_suite* p) const { eegsl_suite_destroy(p); }
};

using space_ptr = std::unique_ptr<eegsl_space, space_deleter>;
using sensors_ptr = std::unique_ptr<eegsl_sensors, sensors_deleter>;
using leadfield_ptr = std::unique_ptr<eegsl_leadfield, leadfield_deleter>;
using suite_ptr = std::unique_ptr<eegsl_suite, suite_deleter>;

/// Cached per-scenario data pulled once through the C API.
struct scenario_info {
  int index = -1;
  std::string label;
  int roi = -1;
  int kind = 0;  // 0 punctual, 1 gaussian
  double snr = 0.0;
  std::uint64_t noise_seed = 0;
  std::vector<double> j_true;
  std::vector<double> v;
};

/// Geometry plus (optionally) the loaded suite.
struct workspace {
  space_ptr space;
  sensors_ptr sensors;
  leadfield_ptr leadfield;
  suite_ptr suite;
  std::vector<scenario_info> scenarios;
};

/// Fails the calling command with the C API's last error when status != OK.
void check_status(eegsl_status status, const std::string& what);

/// Space, sensors and lead field rebuilt deterministically from the config.
workspace build_geometry(const run_config& config);

/// Builds the 16-scenario suite in memory and caches scenario data.
void build_suite(workspace& ws, const run_config& config);

/// Loads a previously saved suite from `dir` and caches scenario data.
void load_suite_dir(workspace& ws, const std::string& dir);

/// Canonical suite location under the output directory.
std::string suite_dir(const run_config& config);

struct solve_output {
  std::vector<double> j;
  double runtime_ms = 0.0;
  bool is_moeaar = false;
  double lambda1 = 0.0;  // classic methods
  double lambda2 = 0.0;
  eegsl_moeaar_report report{};
  eegsl_metrics_report metrics{};
};

/// Runs one method on one scenario and scores it against the truth. The same
/// path serves cmd_solve and every benchmark row, so a row replayed with its
/// recorded seed reproduces the row's numbers exactly.
solve_output solve_scenario(const workspace& ws, const run_config& config, int scenario_index,
                            const std::string& method, std::uint64_t seed,
                            const std::string& telemetry_path);

/// True for the moeaar-* methods.
bool is_moeaar_method(const std::string& method);

/// Derived per-row seed: stable hash of (bench seed, method, label, repeat).
std::uint64_t row_seed(std::uint64_t bench_seed, const std::string& method,
                       const std::string& label, int rep);

/// Shortest-exact double formatting (17 significant digits).
std::string fmt_g17(double x);

} // namespace cli

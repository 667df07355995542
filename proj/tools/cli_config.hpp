#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

/// Raised for malformed config files, bad values, or failed validation.
/// Maps to exit code 2 (usage error).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full run configuration. Defaults are the desk-scale study; every field can
/// be overridden from a sectioned key/value file and a few CLI flags.
struct run_config {
  // [space]
  int sources = 500;
  double r_cortex = 0.65;
  int rois = 8;
  std::uint64_t space_seed = 101;

  // [sensors]
  int sensor_count = 32;

  // [head]
  std::array<double, 3> radii = {0.87, 0.92, 1.0};
  std::array<double, 3> conductivities = {0.33, 0.0042, 0.33};
  int series_terms = 60;
  double series_tol = 1e-10;

  // [suite]
  std::uint64_t suite_seed = 2024;
  std::array<int, 4> regions = {0, 1, 2, 3};

  // [classic]
  int grid_points = 30;
  double classic_tol = 1e-8;
  int classic_max_iter = 2000;

  // [moeaar]
  int iterations = 100;
  double crossover_fraction = 0.8;
  double mutation_fraction = 0.5;
  double sigma0_factor = 0.1;
  double clamp_factor = 10.0;
  int ls_max_iter = 25;
  double ls_tol = 1e-8;
  bool telemetry = false;

  // [bench]
  std::vector<std::string> methods = {"ridge-l",   "lasso",     "enet-l",
                                      "moeaar-l0", "moeaar-l1", "moeaar-l2"};
  int repeat = 10;
  std::uint64_t bench_seed = 7;
  int workers = 0;  // 0 = one per hardware thread

  // [output]
  std::string out_dir = "out";
};

/// All recognized method names, in canonical order.
const std::vector<std::string>& known_methods();

/// Parses a sectioned key/value file ('#'/';' comments) over the defaults.
/// Unknown sections or keys are errors.
run_config load_config(const std::string& path);

/// Re-parseable dump of the effective configuration.
std::string dump_config(const run_config& config);

/// Cross-field checks; throws config_error with the first violation.
void validate_config(const run_config& config);

} // namespace cli

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eegsl.h"

namespace {

/// RAII temp path (file or directory), removed recursively on destruction.
struct temp_path {
  std::filesystem::path path;
  explicit temp_path(const std::string& stem)
      : path(std::filesystem::temp_directory_path() / stem) {
    std::filesystem::remove_all(path);
  }
  ~temp_path() { std::filesystem::remove_all(path); }
  std::string str() const { return path.string(); }
};

struct fixture {
  eegsl_space* space = nullptr;
  eegsl_sensors* sensors = nullptr;
  eegsl_leadfield* lf = nullptr;

  // r = 0.65 keeps the 60-term series tail below the truncation tolerance
  fixture(int n, int m, int k, uint64_t seed) {
    REQUIRE(eegsl_space_create(n, 0.65, k, seed, &space) == EEGSL_OK);
    REQUIRE(eegsl_sensors_create(m, &sensors) == EEGSL_OK);
    REQUIRE(eegsl_leadfield_compute(space, sensors, nullptr, &lf) == EEGSL_OK);
  }
  ~fixture() {
    eegsl_leadfield_destroy(lf);
    eegsl_sensors_destroy(sensors);
    eegsl_space_destroy(space);
  }
};

/// Index of the first scenario matching (kind, snr); -1 if none.
int find_scenario(const eegsl_suite* suite, int want_kind, double want_snr) {
  for (int i = 0; i < eegsl_suite_size(suite); ++i) {
    int kind = -1;
    double snr = -1.0;
    REQUIRE(eegsl_scenario_meta(suite, i, nullptr, &kind, &snr, nullptr) == EEGSL_OK);
    if (kind == want_kind && snr == want_snr) return i;
  }
  return -1;
}

} // namespace

TEST_CASE("version and defaults") {
  CHECK(std::string(eegsl_version()) == "1.0.0");

  eegsl_head_params params{};
  eegsl_head_params_default(&params);
  CHECK(params.radii[0] == 0.87);
  CHECK(params.radii[1] == 0.92);
  CHECK(params.radii[2] == 1.0);
  CHECK(params.conductivities[0] == 0.33);
  CHECK(params.conductivities[1] == 0.0042);
  CHECK(params.conductivities[2] == 0.33);
  CHECK(params.series_terms == 60);
  CHECK(params.series_tol == 1e-10);

  eegsl_moeaar_options options{};
  eegsl_moeaar_options_default(&options);
  CHECK(options.iterations == 100);
  CHECK(options.crossover_fraction == 0.8);
  CHECK(options.mutation_fraction == 0.5);
  CHECK(options.seed == 0);
  CHECK(options.sigma0_factor == 0.1);
  CHECK(options.clamp_factor == 10.0);
  CHECK(options.ls_max_iter == 25);
  CHECK(options.ls_tol == 1e-8);
  CHECK(options.telemetry_path == nullptr);
}

TEST_CASE("space handle exposes geometry and rejects bad calls") {
  eegsl_space* space = nullptr;
  REQUIRE(eegsl_space_create(60, 0.8, 4, 7, &space) == EEGSL_OK);
  CHECK(eegsl_space_size(space) == 60);
  CHECK(eegsl_space_roi_count(space) == 4);

  std::vector<double> xyz(3 * 60);
  REQUIRE(eegsl_space_positions(space, xyz.data(), 180) == EEGSL_OK);
  for (int i = 0; i < 60; ++i) {
    const double r = std::sqrt(xyz[3 * i] * xyz[3 * i] + xyz[3 * i + 1] * xyz[3 * i + 1] +
                               xyz[3 * i + 2] * xyz[3 * i + 2]);
    CHECK(r == doctest::Approx(0.8).epsilon(1e-12));
  }

  std::vector<int> labels(60);
  REQUIRE(eegsl_space_roi_labels(space, labels.data(), 60) == EEGSL_OK);
  for (int label : labels) {
    CHECK(label >= 0);
    CHECK(label < 4);
  }

  CHECK(eegsl_space_positions(space, xyz.data(), 10) == EEGSL_SHAPE_MISMATCH);
  CHECK(std::string(eegsl_last_error()) != "");
  CHECK(eegsl_space_positions(nullptr, xyz.data(), 180) == EEGSL_INVALID_ARGUMENT);
  CHECK(eegsl_space_create(60, 0.8, 4, 7, nullptr) == EEGSL_INVALID_ARGUMENT);

  // success clears the sticky message
  REQUIRE(eegsl_space_roi_labels(space, labels.data(), 60) == EEGSL_OK);
  CHECK(std::string(eegsl_last_error()) == "");

  eegsl_space_destroy(space);
  eegsl_space_destroy(nullptr);  // must be a no-op
  CHECK(eegsl_space_size(nullptr) == 0);
}

TEST_CASE("lead field computes, copies out, and round-trips through disk") {
  fixture fix(40, 12, 4, 11);
  CHECK(eegsl_leadfield_rows(fix.lf) == 12);
  CHECK(eegsl_leadfield_cols(fix.lf) == 40);
  CHECK(eegsl_leadfield_truncation_warning(fix.lf) == 0);

  std::vector<double> data(12 * 40);
  REQUIRE(eegsl_leadfield_data(fix.lf, data.data(), 480) == EEGSL_OK);
  // average reference: every column sums to ~0
  for (int j = 0; j < 40; ++j) {
    double colsum = 0.0;
    for (int i = 0; i < 12; ++i) colsum += data[i * 40 + j];
    CHECK(std::abs(colsum) < 1e-12);
  }

  temp_path file("eegsl_capi_lf.csv");
  REQUIRE(eegsl_leadfield_save(fix.lf, file.str().c_str()) == EEGSL_OK);
  eegsl_leadfield* loaded = nullptr;
  REQUIRE(eegsl_leadfield_load(file.str().c_str(), &loaded) == EEGSL_OK);
  std::vector<double> reloaded(12 * 40);
  REQUIRE(eegsl_leadfield_data(loaded, reloaded.data(), 480) == EEGSL_OK);
  for (size_t i = 0; i < data.size(); ++i) CHECK(reloaded[i] == data[i]);
  eegsl_leadfield_destroy(loaded);

  eegsl_leadfield* missing = nullptr;
  CHECK(eegsl_leadfield_load("/nonexistent/eegsl.csv", &missing) == EEGSL_IO);
}

TEST_CASE("suite builds deterministically and survives save/load") {
  fixture fix(40, 12, 4, 11);
  const int regions[4] = {0, 1, 2, 3};
  eegsl_suite* suite = nullptr;
  REQUIRE(eegsl_suite_build(fix.space, fix.lf, regions, 42, &suite) == EEGSL_OK);
  REQUIRE(eegsl_suite_size(suite) == 16);

  int n_noiseless = 0, n_noisy = 0, n_punctual = 0, n_gaussian = 0;
  for (int i = 0; i < 16; ++i) {
    int roi = -1, kind = -1;
    double snr = -1.0;
    uint64_t noise_seed = 0;
    REQUIRE(eegsl_scenario_meta(suite, i, &roi, &kind, &snr, &noise_seed) == EEGSL_OK);
    CHECK(roi >= 0);
    CHECK(roi < 4);
    (snr == 0.0 ? n_noiseless : n_noisy)++;
    (kind == 0 ? n_punctual : n_gaussian)++;
    if (snr != 0.0) CHECK(snr == 3.0);

    char label[128];
    REQUIRE(eegsl_scenario_label(suite, i, label, 128) == EEGSL_OK);
    CHECK(std::string(label) != "");
  }
  CHECK(n_noiseless == 8);
  CHECK(n_noisy == 8);
  CHECK(n_punctual == 8);
  CHECK(n_gaussian == 8);

  std::vector<double> j_true(40), v(12);
  REQUIRE(eegsl_scenario_truth(suite, 0, j_true.data(), 40) == EEGSL_OK);
  REQUIRE(eegsl_scenario_recording(suite, 0, v.data(), 12) == EEGSL_OK);
  CHECK(eegsl_scenario_truth(suite, 0, j_true.data(), 5) == EEGSL_SHAPE_MISMATCH);
  CHECK(eegsl_scenario_truth(suite, 99, j_true.data(), 40) == EEGSL_INVALID_ARGUMENT);

  // same inputs, same suite
  eegsl_suite* again = nullptr;
  REQUIRE(eegsl_suite_build(fix.space, fix.lf, regions, 42, &again) == EEGSL_OK);
  std::vector<double> v2(12);
  REQUIRE(eegsl_scenario_recording(again, 0, v2.data(), 12) == EEGSL_OK);
  for (int i = 0; i < 12; ++i) CHECK(v2[i] == v[i]);
  eegsl_suite_destroy(again);

  temp_path dir("eegsl_capi_suite");
  REQUIRE(eegsl_suite_save(suite, dir.str().c_str()) == EEGSL_OK);
  eegsl_suite* loaded = nullptr;
  REQUIRE(eegsl_suite_load(dir.str().c_str(), &loaded) == EEGSL_OK);
  REQUIRE(eegsl_suite_size(loaded) == 16);
  std::vector<double> v3(12);
  REQUIRE(eegsl_scenario_recording(loaded, 0, v3.data(), 12) == EEGSL_OK);
  for (int i = 0; i < 12; ++i) CHECK(v3[i] == v[i]);
  eegsl_suite_destroy(loaded);
  eegsl_suite_destroy(suite);
}

TEST_CASE("classic solve selects a strength and fits the recording") {
  fixture fix(40, 12, 4, 11);
  const int regions[4] = {0, 1, 2, 3};
  eegsl_suite* suite = nullptr;
  REQUIRE(eegsl_suite_build(fix.space, fix.lf, regions, 42, &suite) == EEGSL_OK);
  const int idx = find_scenario(suite, 0, 0.0);
  REQUIRE(idx >= 0);
  std::vector<double> v(12);
  REQUIRE(eegsl_scenario_recording(suite, idx, v.data(), 12) == EEGSL_OK);

  std::vector<double> j(40);
  double lambdas[2] = {-1.0, -1.0};
  REQUIRE(eegsl_solve_classic(fix.lf, fix.space, v.data(), 12, "lasso", 10, 1e-8, 500, j.data(),
                              40, lambdas) == EEGSL_OK);
  CHECK(lambdas[0] > 0.0);
  CHECK(lambdas[1] == 0.0);
  double max_abs = 0.0;
  for (double x : j) max_abs = std::max(max_abs, std::abs(x));
  CHECK(max_abs > 0.0);

  REQUIRE(eegsl_solve_classic(fix.lf, fix.space, v.data(), 12, "enet-l", 5, 1e-6, 200, j.data(),
                              40, lambdas) == EEGSL_OK);
  CHECK(lambdas[0] > 0.0);
  CHECK(lambdas[1] > 0.0);

  CHECK(eegsl_solve_classic(fix.lf, fix.space, v.data(), 12, "mne", 10, 1e-8, 500, j.data(), 40,
                            lambdas) == EEGSL_INVALID_ARGUMENT);
  CHECK(std::string(eegsl_last_error()).find("mne") != std::string::npos);
  CHECK(eegsl_solve_classic(fix.lf, fix.space, v.data(), 7, "lasso", 10, 1e-8, 500, j.data(), 40,
                            lambdas) == EEGSL_SHAPE_MISMATCH);
  eegsl_suite_destroy(suite);
}

TEST_CASE("moeaar solve produces a decision and is reproducible") {
  fixture fix(24, 8, 4, 13);
  const int regions[4] = {0, 1, 2, 3};
  eegsl_suite* suite = nullptr;
  REQUIRE(eegsl_suite_build(fix.space, fix.lf, regions, 5, &suite) == EEGSL_OK);
  const int idx = find_scenario(suite, 0, 0.0);
  REQUIRE(idx >= 0);
  std::vector<double> v(8);
  REQUIRE(eegsl_scenario_recording(suite, idx, v.data(), 8) == EEGSL_OK);

  eegsl_moeaar_options options{};
  eegsl_moeaar_options_default(&options);
  options.iterations = 3;
  options.seed = 17;

  std::vector<double> j(24), j2(24);
  eegsl_moeaar_report report{};
  REQUIRE(eegsl_solve_moeaar(fix.lf, fix.space, v.data(), 8, "l0", &options, j.data(), 24,
                             &report) == EEGSL_OK);
  CHECK(report.front_size >= 1);
  CHECK(report.chosen_roi >= 0);
  CHECK(report.chosen_roi < 4);
  CHECK(report.cycles_run == 3);

  REQUIRE(eegsl_solve_moeaar(fix.lf, fix.space, v.data(), 8, "l0", &options, j2.data(), 24,
                             nullptr) == EEGSL_OK);
  for (int i = 0; i < 24; ++i) CHECK(j2[i] == j[i]);

  CHECK(eegsl_solve_moeaar(fix.lf, fix.space, v.data(), 8, "huber", &options, j.data(), 24,
                           &report) == EEGSL_INVALID_ARGUMENT);
  eegsl_suite_destroy(suite);
}

TEST_CASE("metrics report matches the perfect-recovery expectations") {
  eegsl_space* space = nullptr;
  REQUIRE(eegsl_space_create(30, 0.8, 3, 3, &space) == EEGSL_OK);

  std::vector<double> j_true(30, 0.0), j_est(30, 0.0);
  j_true[4] = 2.0;
  j_est[4] = 1.0;  // scale must not matter
  eegsl_metrics_report report{};
  REQUIRE(eegsl_metrics(space, j_true.data(), j_est.data(), 30, &report) == EEGSL_OK);
  CHECK(report.localization_score == 1.0);
  CHECK(report.visibility_score == 1.0);
  CHECK(report.spatial_resolution_score == 1.0);
  CHECK(report.raw_distance == 0.0);

  const std::vector<double> zeros(30, 0.0);
  CHECK(eegsl_metrics(space, zeros.data(), j_est.data(), 30, &report) == EEGSL_DATA);
  CHECK(eegsl_metrics(space, j_true.data(), j_est.data(), 29, &report) == EEGSL_SHAPE_MISMATCH);
  eegsl_space_destroy(space);
}

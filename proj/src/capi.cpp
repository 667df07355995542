#include "eegsl.h"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "eegsl/coevolution.hpp"
#include "eegsl/errors.hpp"
#include "eegsl/headmodel.hpp"
#include "eegsl/metrics.hpp"
#include "eegsl/objectives.hpp"
#include "eegsl/simulator.hpp"
#include "eegsl/solvers_classic.hpp"

struct eegsl_space {
  eegsl::source_space impl;
};

struct eegsl_sensors {
  eegsl::sensor_array impl;
};

struct eegsl_leadfield {
  eegsl::lead_field impl;
};

struct eegsl_suite {
  std::vector<eegsl::scenario> impl;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
eegsl_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EEGSL_OK;
  } catch (const eegsl::Error& e) {
    g_last_error = e.what();
    return static_cast<eegsl_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EEGSL_UNKNOWN;
  } catch (...) {
    g_last_error = "unidentified failure";
    return EEGSL_UNKNOWN;
  }
}

void check(bool cond, const char* what) {
  eegsl::require(cond, eegsl::errc::invalid_argument, what);
}

void copy_vector(const Eigen::VectorXd& v, double* out, int capacity, const char* what) {
  check(out != nullptr, what);
  eegsl::require(capacity >= static_cast<int>(v.size()), eegsl::errc::shape_mismatch,
                 "output buffer too small");
  std::memcpy(out, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
}

eegsl::head_model to_head_model(const eegsl_head_params* params) {
  eegsl::head_model model;
  if (params != nullptr) {
    for (int i = 0; i < 3; ++i) {
      model.radii[i] = params->radii[i];
      model.conductivities[i] = params->conductivities[i];
    }
    model.series_terms = params->series_terms;
    model.series_tol = params->series_tol;
  }
  return model;
}

const eegsl::scenario& scenario_at(const eegsl_suite* suite, int index) {
  check(suite != nullptr, "null suite handle");
  eegsl::require(index >= 0 && index < static_cast<int>(suite->impl.size()),
                 eegsl::errc::invalid_argument, "scenario index out of range");
  return suite->impl[static_cast<size_t>(index)];
}

} // namespace

extern "C" {

const char* eegsl_version(void) { return "1.0.0"; }

const char* eegsl_last_error(void) { return g_last_error.c_str(); }

void eegsl_head_params_default(eegsl_head_params* out) {
  if (out == nullptr) return;
  const eegsl::head_model model;
  for (int i = 0; i < 3; ++i) {
    out->radii[i] = model.radii[i];
    out->conductivities[i] = model.conductivities[i];
  }
  out->series_terms = model.series_terms;
  out->series_tol = model.series_tol;
}

eegsl_status eegsl_space_create(int n_sources, double r_cortex, int roi_count, uint64_t seed,
                                eegsl_space** out) {
  return guarded([&] {
    check(out != nullptr, "null output handle");
    auto handle = std::make_unique<eegsl_space>();
    handle->impl = eegsl::build_source_space(n_sources, r_cortex, roi_count, seed);
    *out = handle.release();
  });
}

void eegsl_space_destroy(eegsl_space* space) { delete space; }

int eegsl_space_size(const eegsl_space* space) {
  return space == nullptr ? 0 : space->impl.size();
}

int eegsl_space_roi_count(const eegsl_space* space) {
  return space == nullptr ? 0 : space->impl.roi_count;
}

eegsl_status eegsl_space_positions(const eegsl_space* space, double* out_xyz, int capacity) {
  return guarded([&] {
    check(space != nullptr, "null space handle");
    check(out_xyz != nullptr, "null output buffer");
    const int n = space->impl.size();
    eegsl::require(capacity >= 3 * n, eegsl::errc::shape_mismatch, "output buffer too small");
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < 3; ++c) out_xyz[3 * i + c] = space->impl.positions(i, c);
  });
}

eegsl_status eegsl_space_roi_labels(const eegsl_space* space, int* out, int capacity) {
  return guarded([&] {
    check(space != nullptr, "null space handle");
    check(out != nullptr, "null output buffer");
    const int n = space->impl.size();
    eegsl::require(capacity >= n, eegsl::errc::shape_mismatch, "output buffer too small");
    for (int i = 0; i < n; ++i) out[i] = space->impl.roi_labels[static_cast<size_t>(i)];
  });
}

eegsl_status eegsl_sensors_create(int n_sensors, eegsl_sensors** out) {
  return guarded([&] {
    check(out != nullptr, "null output handle");
    auto handle = std::make_unique<eegsl_sensors>();
    handle->impl = eegsl::build_sensor_array(n_sensors);
    *out = handle.release();
  });
}

void eegsl_sensors_destroy(eegsl_sensors* sensors) { delete sensors; }

int eegsl_sensors_size(const eegsl_sensors* sensors) {
  return sensors == nullptr ? 0 : sensors->impl.size();
}

eegsl_status eegsl_leadfield_compute(const eegsl_space* space, const eegsl_sensors* sensors,
                                     const eegsl_head_params* params, eegsl_leadfield** out) {
  return guarded([&] {
    check(space != nullptr, "null space handle");
    check(sensors != nullptr, "null sensors handle");
    check(out != nullptr, "null output handle");
    auto handle = std::make_unique<eegsl_leadfield>();
    handle->impl = eegsl::compute_leadfield(to_head_model(params), space->impl, sensors->impl);
    *out = handle.release();
  });
}

void eegsl_leadfield_destroy(eegsl_leadfield* lf) { delete lf; }

int eegsl_leadfield_rows(const eegsl_leadfield* lf) {
  return lf == nullptr ? 0 : lf->impl.sensors();
}

int eegsl_leadfield_cols(const eegsl_leadfield* lf) {
  return lf == nullptr ? 0 : lf->impl.sources();
}

int eegsl_leadfield_truncation_warning(const eegsl_leadfield* lf) {
  return (lf != nullptr && lf->impl.truncation_warning) ? 1 : 0;
}

eegsl_status eegsl_leadfield_data(const eegsl_leadfield* lf, double* out, int capacity) {
  return guarded([&] {
    check(lf != nullptr, "null lead-field handle");
    check(out != nullptr, "null output buffer");
    const int m = lf->impl.sensors();
    const int n = lf->impl.sources();
    eegsl::require(capacity >= m * n, eegsl::errc::shape_mismatch, "output buffer too small");
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = lf->impl.matrix(i, j);
  });
}

eegsl_status eegsl_leadfield_save(const eegsl_leadfield* lf, const char* path) {
  return guarded([&] {
    check(lf != nullptr, "null lead-field handle");
    check(path != nullptr, "null path");
    eegsl::save_leadfield(lf->impl, path);
  });
}

eegsl_status eegsl_leadfield_load(const char* path, eegsl_leadfield** out) {
  return guarded([&] {
    check(path != nullptr, "null path");
    check(out != nullptr, "null output handle");
    auto handle = std::make_unique<eegsl_leadfield>();
    handle->impl = eegsl::load_leadfield(path);
    *out = handle.release();
  });
}

eegsl_status eegsl_suite_build(const eegsl_space* space, const eegsl_leadfield* lf,
                               const int regions[4], uint64_t seed, eegsl_suite** out) {
  return guarded([&] {
    check(space != nullptr, "null space handle");
    check(lf != nullptr, "null lead-field handle");
    check(regions != nullptr, "null regions");
    check(out != nullptr, "null output handle");
    const std::array<int, 4> r = {regions[0], regions[1], regions[2], regions[3]};
    auto handle = std::make_unique<eegsl_suite>();
    handle->impl = eegsl::build_test_suite(space->impl, lf->impl, r, seed);
    *out = handle.release();
  });
}

void eegsl_suite_destroy(eegsl_suite* suite) { delete suite; }

int eegsl_suite_size(const eegsl_suite* suite) {
  return suite == nullptr ? 0 : static_cast<int>(suite->impl.size());
}

eegsl_status eegsl_suite_save(const eegsl_suite* suite, const char* dir) {
  return guarded([&] {
    check(suite != nullptr, "null suite handle");
    check(dir != nullptr, "null directory");
    eegsl::save_suite(suite->impl, dir);
  });
}

eegsl_status eegsl_suite_load(const char* dir, eegsl_suite** out) {
  return guarded([&] {
    check(dir != nullptr, "null directory");
    check(out != nullptr, "null output handle");
    auto handle = std::make_unique<eegsl_suite>();
    handle->impl = eegsl::load_suite(dir);
    *out = handle.release();
  });
}

eegsl_status eegsl_scenario_label(const eegsl_suite* suite, int index, char* buf, int capacity) {
  return guarded([&] {
    const eegsl::scenario& scen = scenario_at(suite, index);
    check(buf != nullptr, "null output buffer");
    eegsl::require(capacity > static_cast<int>(scen.label.size()), eegsl::errc::shape_mismatch,
                   "output buffer too small");
    std::memcpy(buf, scen.label.c_str(), scen.label.size() + 1);
  });
}

eegsl_status eegsl_scenario_meta(const eegsl_suite* suite, int index, int* roi, int* kind,
                                 double* snr, uint64_t* noise_seed) {
  return guarded([&] {
    const eegsl::scenario& scen = scenario_at(suite, index);
    if (roi != nullptr) *roi = scen.spec.roi;
    if (kind != nullptr) *kind = scen.spec.kind == eegsl::source_kind::punctual ? 0 : 1;
    if (snr != nullptr) *snr = scen.v.snr;
    if (noise_seed != nullptr) *noise_seed = scen.v.seed;
  });
}

eegsl_status eegsl_scenario_truth(const eegsl_suite* suite, int index, double* out, int capacity) {
  return guarded([&] {
    copy_vector(scenario_at(suite, index).j_true, out, capacity, "null output buffer");
  });
}

eegsl_status eegsl_scenario_recording(const eegsl_suite* suite, int index, double* out,
                                      int capacity) {
  return guarded([&] {
    copy_vector(scenario_at(suite, index).v.values, out, capacity, "null output buffer");
  });
}

eegsl_status eegsl_solve_classic(const eegsl_leadfield* lf, const eegsl_space* space,
                                 const double* v, int v_len, const char* method, int grid_points,
                                 double tol, int max_iter, double* j_out, int j_capacity,
                                 double lambdas_out[2]) {
  return guarded([&] {
    check(lf != nullptr, "null lead-field handle");
    check(space != nullptr, "null space handle");
    check(v != nullptr, "null recording");
    check(method != nullptr, "null method name");
    check(j_out != nullptr, "null output buffer");
    eegsl::require(v_len == lf->impl.sensors(), eegsl::errc::shape_mismatch,
                   "recording length does not match the lead field");
    eegsl::require(lf->impl.sources() == space->impl.size(), eegsl::errc::shape_mismatch,
                   "lead field and space disagree on source count");

    const std::string name(method);
    eegsl::classic_solver which;
    if (name == "ridge-l")
      which = eegsl::classic_solver::ridge_l;
    else if (name == "lasso")
      which = eegsl::classic_solver::lasso;
    else if (name == "enet-l")
      which = eegsl::classic_solver::enet_l;
    else
      eegsl::fail(eegsl::errc::invalid_argument, "unknown classic method: " + name);

    const Eigen::Map<const Eigen::VectorXd> V(v, v_len);
    const Eigen::SparseMatrix<double> L = eegsl::graph_laplacian(space->impl).matrix;
    eegsl::gcv_options opts;
    if (tol > 0.0) opts.tol = tol;
    if (max_iter > 0) opts.max_iter = max_iter;
    const std::vector<double> grid =
        eegsl::default_lambda_grid(lf->impl.matrix, V, grid_points > 0 ? grid_points : 30);
    const eegsl::regularized_solution sol =
        eegsl::gcv_select(which, lf->impl.matrix, V, L, grid, opts);

    copy_vector(sol.j, j_out, j_capacity, "null output buffer");
    if (lambdas_out != nullptr) {
      lambdas_out[0] = sol.lambdas.empty() ? 0.0 : sol.lambdas[0];
      lambdas_out[1] = sol.lambdas.size() > 1 ? sol.lambdas[1] : 0.0;
    }
  });
}

void eegsl_moeaar_options_default(eegsl_moeaar_options* out) {
  if (out == nullptr) return;
  const eegsl::moeaar_config config;
  out->iterations = config.iterations;
  out->crossover_fraction = config.crossover_fraction;
  out->mutation_fraction = config.mutation_fraction;
  out->seed = config.seed;
  out->sigma0_factor = config.sigma0_factor;
  out->clamp_factor = config.clamp_factor;
  out->ls_max_iter = config.local_search.max_iter;
  out->ls_tol = config.local_search.tol;
  out->telemetry_path = nullptr;
}

eegsl_status eegsl_solve_moeaar(const eegsl_leadfield* lf, const eegsl_space* space,
                                const double* v, int v_len, const char* penalty,
                                const eegsl_moeaar_options* options, double* j_out,
                                int j_capacity, eegsl_moeaar_report* report) {
  return guarded([&] {
    check(lf != nullptr, "null lead-field handle");
    check(space != nullptr, "null space handle");
    check(v != nullptr, "null recording");
    check(penalty != nullptr, "null penalty name");
    check(j_out != nullptr, "null output buffer");
    eegsl::require(v_len == lf->impl.sensors(), eegsl::errc::shape_mismatch,
                   "recording length does not match the lead field");
    eegsl::require(lf->impl.sources() == space->impl.size(), eegsl::errc::shape_mismatch,
                   "lead field and space disagree on source count");

    std::shared_ptr<const Eigen::SparseMatrix<double>> laplacian;
    const std::string name(penalty);
    if (name == "l2L")
      laplacian = std::make_shared<const Eigen::SparseMatrix<double>>(
          eegsl::graph_laplacian(space->impl).matrix);

    eegsl::moeaar_config config;
    config.penalty = eegsl::make_penalty_model(name, laplacian);
    if (options != nullptr) {
      config.iterations = options->iterations;
      config.crossover_fraction = options->crossover_fraction;
      config.mutation_fraction = options->mutation_fraction;
      config.seed = options->seed;
      config.sigma0_factor = options->sigma0_factor;
      config.clamp_factor = options->clamp_factor;
      config.local_search.max_iter = options->ls_max_iter;
      config.local_search.tol = options->ls_tol;
      if (options->telemetry_path != nullptr) config.telemetry_path = options->telemetry_path;
    }

    const Eigen::Map<const Eigen::VectorXd> V(v, v_len);
    const eegsl::moeaar_result result =
        eegsl::run_moeaar(lf->impl.matrix, V, space->impl, config);

    copy_vector(result.decision.choice.coeffs, j_out, j_capacity, "null output buffer");
    if (report != nullptr) {
      report->front_size = static_cast<int>(result.front.members.size());
      report->chosen_roi = result.decision.roi;
      report->knee_f0 = result.decision.knee_f0;
      report->knee_f1 = result.decision.knee_f1;
      report->cycles_run = result.cycles_run;
    }
  });
}

eegsl_status eegsl_metrics(const eegsl_space* space, const double* j_true, const double* j_est,
                           int n, eegsl_metrics_report* out) {
  return guarded([&] {
    check(space != nullptr, "null space handle");
    check(j_true != nullptr, "null truth vector");
    check(j_est != nullptr, "null estimate vector");
    check(out != nullptr, "null output");
    eegsl::require(n == space->impl.size(), eegsl::errc::shape_mismatch,
                   "vector length does not match the space");
    const Eigen::Map<const Eigen::VectorXd> jt(j_true, n);
    const Eigen::Map<const Eigen::VectorXd> je(j_est, n);
    const auto [distance, score] = eegsl::localization_error(jt, je, space->impl);
    out->localization_score = score;
    out->raw_distance = distance;
    out->visibility_score = eegsl::visibility(jt, je);
    out->spatial_resolution_score = eegsl::spatial_resolution(jt, je);
  });
}

} // extern "C"

#ifndef EEGSL_H
#define EEGSL_H

/* C interface to the EEG source-localization toolkit. All entry points
 * return eegsl_status; on failure eegsl_last_error() describes the problem
 * (thread-local). Objects are opaque handles released with the matching
 * _destroy call. Buffers are caller-allocated; capacities are element counts.
 */

#include <stdint.h>

#if defined(_WIN32)
#  if defined(EEGSL_BUILDING_SHARED)
#    define EEGSL_API __declspec(dllexport)
#  else
#    define EEGSL_API __declspec(dllimport)
#  endif
#else
#  define EEGSL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eegsl_status {
  EEGSL_OK = 0,
  EEGSL_INVALID_ARGUMENT = 1,
  EEGSL_SHAPE_MISMATCH = 2,
  EEGSL_GEOMETRY = 3,
  EEGSL_PARSE = 4,
  EEGSL_DATA = 5,
  EEGSL_STATE = 6,
  EEGSL_NUMERIC = 7,
  EEGSL_IO = 8,
  EEGSL_NO_ACTIVE_SOLUTION = 9,
  EEGSL_UNDEFINED_LAMBDA = 10,
  EEGSL_DEGENERATE_GCV = 11,
  EEGSL_UNKNOWN = 127
} eegsl_status;

EEGSL_API const char* eegsl_version(void);

/* Message for the most recent failure on this thread ("" if none). */
EEGSL_API const char* eegsl_last_error(void);

typedef struct eegsl_space eegsl_space;
typedef struct eegsl_sensors eegsl_sensors;
typedef struct eegsl_leadfield eegsl_leadfield;
typedef struct eegsl_suite eegsl_suite;

/* --- head geometry ------------------------------------------------------ */

typedef struct eegsl_head_params {
  double radii[3];          /* cortex, outer skull, scalp; scalp = 1 */
  double conductivities[3]; /* brain, skull, scalp (S/m) */
  int series_terms;
  double series_tol;
} eegsl_head_params;

EEGSL_API void eegsl_head_params_default(eegsl_head_params* out);

/* Cortical grid on a sphere of radius r_cortex, k-means ROI partition. */
EEGSL_API eegsl_status eegsl_space_create(int n_sources, double r_cortex, int roi_count,
                                          uint64_t seed, eegsl_space** out);
EEGSL_API void eegsl_space_destroy(eegsl_space* space);
EEGSL_API int eegsl_space_size(const eegsl_space* space);
EEGSL_API int eegsl_space_roi_count(const eegsl_space* space);
/* Row-major n x 3 positions. */
EEGSL_API eegsl_status eegsl_space_positions(const eegsl_space* space, double* out_xyz,
                                             int capacity);
EEGSL_API eegsl_status eegsl_space_roi_labels(const eegsl_space* space, int* out, int capacity);

/* Upper-hemisphere scalp montage of n_sensors electrodes. */
EEGSL_API eegsl_status eegsl_sensors_create(int n_sensors, eegsl_sensors** out);
EEGSL_API void eegsl_sensors_destroy(eegsl_sensors* sensors);
EEGSL_API int eegsl_sensors_size(const eegsl_sensors* sensors);

/* Three-shell lead field, average-referenced, radial source orientations.
 * params = NULL uses the defaults. */
EEGSL_API eegsl_status eegsl_leadfield_compute(const eegsl_space* space,
                                               const eegsl_sensors* sensors,
                                               const eegsl_head_params* params,
                                               eegsl_leadfield** out);
EEGSL_API void eegsl_leadfield_destroy(eegsl_leadfield* lf);
EEGSL_API int eegsl_leadfield_rows(const eegsl_leadfield* lf);
EEGSL_API int eegsl_leadfield_cols(const eegsl_leadfield* lf);
/* 1 when the spherical-harmonic tail failed the truncation tolerance. */
EEGSL_API int eegsl_leadfield_truncation_warning(const eegsl_leadfield* lf);
/* Row-major m x n matrix copy. */
EEGSL_API eegsl_status eegsl_leadfield_data(const eegsl_leadfield* lf, double* out, int capacity);
EEGSL_API eegsl_status eegsl_leadfield_save(const eegsl_leadfield* lf, const char* path);
EEGSL_API eegsl_status eegsl_leadfield_load(const char* path, eegsl_leadfield** out);

/* --- simulation suite ---------------------------------------------------- */

/* 16 scenarios: 4 regions x {punctual, gaussian} x {snr 0, snr 3}. */
EEGSL_API eegsl_status eegsl_suite_build(const eegsl_space* space, const eegsl_leadfield* lf,
                                         const int regions[4], uint64_t seed, eegsl_suite** out);
EEGSL_API void eegsl_suite_destroy(eegsl_suite* suite);
EEGSL_API int eegsl_suite_size(const eegsl_suite* suite);
EEGSL_API eegsl_status eegsl_suite_save(const eegsl_suite* suite, const char* dir);
EEGSL_API eegsl_status eegsl_suite_load(const char* dir, eegsl_suite** out);

EEGSL_API eegsl_status eegsl_scenario_label(const eegsl_suite* suite, int index, char* buf,
                                            int capacity);
/* kind: 0 punctual, 1 gaussian. Output pointers may be NULL. */
EEGSL_API eegsl_status eegsl_scenario_meta(const eegsl_suite* suite, int index, int* roi,
                                           int* kind, double* snr, uint64_t* noise_seed);
EEGSL_API eegsl_status eegsl_scenario_truth(const eegsl_suite* suite, int index, double* out,
                                            int capacity);
EEGSL_API eegsl_status eegsl_scenario_recording(const eegsl_suite* suite, int index, double* out,
                                                int capacity);

/* --- solvers -------------------------------------------------------------- */

/* method: "ridge-l" | "lasso" | "enet-l". Regularization strengths are
 * selected by generalized cross-validation over a log grid of `grid_points`
 * values; the structural Laplacian comes from the space. Non-positive
 * grid_points, tol or max_iter select the defaults (30, 1e-8, 2000). On
 * return lambdas_out[0] is the primary strength and lambdas_out[1] the
 * quadratic one (0 when the method has none). */
EEGSL_API eegsl_status eegsl_solve_classic(const eegsl_leadfield* lf, const eegsl_space* space,
                                           const double* v, int v_len, const char* method,
                                           int grid_points, double tol, int max_iter,
                                           double* j_out, int j_capacity, double lambdas_out[2]);

typedef struct eegsl_moeaar_options {
  int iterations;
  double crossover_fraction;
  double mutation_fraction;
  uint64_t seed;
  double sigma0_factor;
  double clamp_factor;
  int ls_max_iter;
  double ls_tol;
  const char* telemetry_path; /* per-cycle CSV log; NULL disables */
} eegsl_moeaar_options;

EEGSL_API void eegsl_moeaar_options_default(eegsl_moeaar_options* out);

typedef struct eegsl_moeaar_report {
  int front_size;
  int chosen_roi;
  double knee_f0;
  double knee_f1;
  int cycles_run;
} eegsl_moeaar_report;

/* penalty: "l0" | "l1" | "l2L". report may be NULL. */
EEGSL_API eegsl_status eegsl_solve_moeaar(const eegsl_leadfield* lf, const eegsl_space* space,
                                          const double* v, int v_len, const char* penalty,
                                          const eegsl_moeaar_options* options, double* j_out,
                                          int j_capacity, eegsl_moeaar_report* report);

/* --- metrics -------------------------------------------------------------- */

typedef struct eegsl_metrics_report {
  double localization_score;
  double visibility_score;
  double spatial_resolution_score;
  double raw_distance;
} eegsl_metrics_report;

EEGSL_API eegsl_status eegsl_metrics(const eegsl_space* space, const double* j_true,
                                     const double* j_est, int n, eegsl_metrics_report* out);

#ifdef __cplusplus
}
#endif

#endif /* EEGSL_H */

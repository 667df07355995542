#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eegsl/decision_maker.hpp"
#include "eegsl/headmodel.hpp"
#include "eegsl/local_search.hpp"
#include "eegsl/moea_core.hpp"

namespace eegsl {

/// Best-known full-length solution, assembled from per-group bests.
struct context_vector {
  Eigen::VectorXd values;
};

struct moeaar_config {
  int iterations = 100;
  double crossover_fraction = 0.8;  // children drawn per group, as a share of N
  double mutation_fraction = 0.5;   // share of the children that spawn mutated copies
  penalty_model penalty;
  std::uint64_t seed = 0;
  double sigma0_factor = 0.1;  // initial mutation scale relative to max |J_init|
  double clamp_factor = 10.0;  // coefficient clamp relative to max |J_init| (0 = none)
  lsts_options local_search;
  std::string telemetry_path;  // per-cycle CSV log; empty disables it
};

/// Local-search prox mode matching a single-term penalty model.
prox_mode ls_mode_for(const penalty_model& model);

/// One individual per ROI: the pseudoinverse solution restricted to that ROI
/// (zeros elsewhere), tagged and evaluated.
population initial_population(const source_space& space, const Eigen::MatrixXd& K,
                              const Eigen::VectorXd& V, const penalty_model& model);

/// Projects every member onto the group coordinates. Sub-individuals keep the
/// roi tag, record their parent index, and start unevaluated.
population project_subpopulation(const population& pop, const std::vector<int>& group);

/// cv with the group coordinates overwritten by the sub-individual's values.
Eigen::VectorXd compose(const context_vector& cv, const individual& sub,
                        const std::vector<int>& group);

/// One cooperative-coevolution pass: for each ROI group in ascending order,
/// run one NSGA-II generation on the projected subpopulation (objectives
/// evaluated through compose with cv), write the group best into cv unless it
/// worsens the composed data fit, and reassemble survivors onto their
/// parents' out-of-group coordinates. Returns the reassembled population
/// (size preserved) re-evaluated on its own coefficients; cv is updated in
/// place.
population cc_step(const population& pop, const moeaar_config& config, const source_space& space,
                   const Eigen::MatrixXd& K, const Eigen::VectorXd& V, context_vector& cv,
                   double sigma_t, double clamp_abs, Rng& rng);

struct moeaar_result {
  population front;                       // final known Pareto front (rank-0 set)
  std::vector<objective_vector> archive;  // objective vectors of the front
  decision_trace decision;
  context_vector cv;
  int cycles_run = 0;
};

/// Full MOEAAR run: initial population, `iterations` cycles of
/// cc_step -> local search -> environmental selection, then the decision
/// maker on the final front.
moeaar_result run_moeaar(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                         const source_space& space, const moeaar_config& config);

} // namespace eegsl

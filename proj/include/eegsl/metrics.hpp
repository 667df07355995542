#pragma once

#include <Eigen/Dense>
#include <utility>

#include "eegsl/headmodel.hpp"
#include "eegsl/simulator.hpp"

namespace eegsl {

/// Normalized quality indicators; every score lies in [0, 1], higher is
/// better. These normalizations are this toolkit's own — orderings and trends
/// are meaningful, absolute values are not comparable across toolkits.
struct metrics_report {
  double localization_score = 0.0;
  double visibility_score = 0.0;
  double spatial_resolution_score = 0.0;
  double raw_distance = 0.0;  // argmax-to-argmax distance, source-space units
};

/// Largest pairwise distance between source positions.
double source_space_diameter(const source_space& space);

/// (raw_distance, score): d = distance between the positions of
/// argmax|j_true| and argmax|j_est|, score = 1 - d/D with D the source-space
/// diameter. A zero estimate scores 0; a zero truth is an error.
std::pair<double, double> localization_error(const Eigen::VectorXd& j_true,
                                             const Eigen::VectorXd& j_est,
                                             const source_space& space);

/// |j_est| at the true argmax site, normalized by max|j_est|. Zero estimate
/// scores 0.
double visibility(const Eigen::VectorXd& j_true, const Eigen::VectorXd& j_est);

/// Jaccard index between the half-max supports {i : |j_i| >= 0.5 max|j|} of
/// truth and estimate. Zero estimate scores 0.
double spatial_resolution(const Eigen::VectorXd& j_true, const Eigen::VectorXd& j_est);

/// All three indicators for one scenario.
metrics_report evaluate_all(const scenario& scen, const Eigen::VectorXd& j_est,
                            const source_space& space);

} // namespace eegsl

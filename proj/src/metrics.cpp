#include "eegsl/metrics.hpp"

#include <cmath>

#include "eegsl/errors.hpp"

namespace eegsl {

namespace {

/// First index of the largest magnitude; -1 for an all-zero vector.
Eigen::Index abs_argmax(const Eigen::VectorXd& j) {
  Eigen::Index idx = 0;
  const double mx = j.cwiseAbs().maxCoeff(&idx);
  return mx == 0.0 ? -1 : idx;
}

void check_pair(const Eigen::VectorXd& j_true, const Eigen::VectorXd& j_est) {
  require(j_true.size() == j_est.size(), errc::shape_mismatch,
          "metrics: truth and estimate lengths differ");
  require(j_true.size() > 0, errc::invalid_argument, "metrics: empty vectors");
  require(j_true.cwiseAbs().maxCoeff() > 0.0, errc::data, "metrics: zero ground truth");
}

} // namespace

double source_space_diameter(const source_space& space) {
  double best = 0.0;
  for (int a = 0; a < space.size(); ++a) {
    for (int b = a + 1; b < space.size(); ++b) {
      best = std::max(best, (space.positions.row(a) - space.positions.row(b)).norm());
    }
  }
  return best;
}

std::pair<double, double> localization_error(const Eigen::VectorXd& j_true,
                                             const Eigen::VectorXd& j_est,
                                             const source_space& space) {
  check_pair(j_true, j_est);
  require(j_true.size() == space.size(), errc::shape_mismatch,
          "localization_error: vectors do not match the source space");
  const double diameter = source_space_diameter(space);
  const Eigen::Index t = abs_argmax(j_true);
  const Eigen::Index e = abs_argmax(j_est);
  if (e < 0) return {diameter, 0.0};  // zero estimate: no localization at all
  const double d = (space.positions.row(t) - space.positions.row(e)).norm();
  if (d == 0.0) return {0.0, 1.0};
  return {d, 1.0 - d / diameter};
}

double visibility(const Eigen::VectorXd& j_true, const Eigen::VectorXd& j_est) {
  check_pair(j_true, j_est);
  const double mx = j_est.cwiseAbs().maxCoeff();
  if (mx == 0.0) return 0.0;
  return std::abs(j_est[abs_argmax(j_true)]) / mx;
}

double spatial_resolution(const Eigen::VectorXd& j_true, const Eigen::VectorXd& j_est) {
  check_pair(j_true, j_est);
  const double mx_t = j_true.cwiseAbs().maxCoeff();
  const double mx_e = j_est.cwiseAbs().maxCoeff();
  if (mx_e == 0.0) return 0.0;
  int both = 0, either = 0;
  for (Eigen::Index i = 0; i < j_true.size(); ++i) {
    const bool in_t = std::abs(j_true[i]) >= 0.5 * mx_t;
    const bool in_e = std::abs(j_est[i]) >= 0.5 * mx_e;
    both += in_t && in_e;
    either += in_t || in_e;
  }
  return static_cast<double>(both) / static_cast<double>(either);
}

metrics_report evaluate_all(const scenario& scen, const Eigen::VectorXd& j_est,
                            const source_space& space) {
  metrics_report report;
  const auto [d, score] = localization_error(scen.j_true, j_est, space);
  report.raw_distance = d;
  report.localization_score = score;
  report.visibility_score = visibility(scen.j_true, j_est);
  report.spatial_resolution_score = spatial_resolution(scen.j_true, j_est);
  return report;
}

} // namespace eegsl

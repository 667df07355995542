#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "eegsl/errors.hpp"

namespace eegsl {

/// Scalar transforms g applied to |theta_i| with theta = L J.
enum class penalty_transform { abs, square, l0_indicator };

/// One penalty term of the family Psi(J) = sum_r lambda_r sum_i g_r(|theta_i|).
/// A null structure matrix means L = identity. lambda participates only in
/// single-objective (regularized) use; the multi-objective evaluation ignores it.
struct penalty_term {
  penalty_transform g = penalty_transform::abs;
  std::shared_ptr<const Eigen::SparseMatrix<double>> L;
  std::optional<double> lambda;
};

struct penalty_model {
  std::vector<penalty_term> terms;
  double l0_epsilon = 1e-6;  // relative "nonzero" threshold, in (0, 1e-2]

  int objective_count() const { return static_cast<int>(terms.size()) + 1; }
};

/// Objective vector (f0, f1, ..., fR): squared residual then penalty values.
using objective_vector = std::vector<double>;

/// ||V - K J||^2.
double residual_ss(const Eigen::MatrixXd& K, const Eigen::VectorXd& V, const Eigen::VectorXd& J);

/// Single penalty value p(theta) with theta = L J (L = identity when term.L is
/// null). abs -> ||theta||_1; square -> ||theta||_2^2; l0 -> count of entries
/// with |theta_i| > l0_epsilon * max|theta| (zero vector counts 0).
double penalty(const Eigen::VectorXd& J, const penalty_term& term, double l0_epsilon);

/// Multi-objective evaluation (residual_ss, penalties...), lambdas ignored.
objective_vector evaluate(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                          const Eigen::VectorXd& J, const penalty_model& model);

/// Named models for the run config: l0 | l1 | l2L | enetL. Models touching the
/// structural operator (l2L, enetL) require a Laplacian; others ignore it.
penalty_model make_penalty_model(std::string_view name,
                                 std::shared_ptr<const Eigen::SparseMatrix<double>> laplacian);

} // namespace eegsl

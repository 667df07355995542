#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "eegsl/errors.hpp"

namespace eegsl {

struct regularized_solution {
  Eigen::VectorXd j;
  std::vector<double> lambdas;
  std::vector<std::pair<double, double>> gcv_curve;  // (lambda, score) samples
  int iterations = 0;
  bool converged = true;
  bool jitter_applied = false;  // singular normal equations needed a 1e-12 ridge
};

/// Minimum-norm least-squares solution J = K^+ V, SVD with relative singular
/// value cutoff 1e-10.
Eigen::VectorXd pseudoinverse_solution(const Eigen::MatrixXd& K, const Eigen::VectorXd& V);

/// Largest eigenvalue of 2 K^T K (the gradient Lipschitz constant of
/// ||V - K J||^2) by 50-step power iteration from a deterministic start.
double gradient_lipschitz(const Eigen::MatrixXd& K);

/// Closed-form Ridge-L: (K^T K + lambda L^T L) J = K^T V. Singular systems get
/// a 1e-12 identity jitter and the flag set.
regularized_solution solve_ridge_l(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                   const Eigen::SparseMatrix<double>& L, double lambda);

/// Iterative soft-thresholding for min ||V - K J||^2 + lambda ||J||_1; stops
/// when the max-norm step falls below tol.
regularized_solution solve_lasso(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                 double lambda, double tol = 1e-8, int max_iter = 2000);

/// Proximal gradient for min ||V - K J||^2 + lambda1 ||J||_1 + lambda2 ||L J||^2
/// (smooth part: residual + lambda2 term).
regularized_solution solve_enet_l(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                  const Eigen::SparseMatrix<double>& L, double lambda1,
                                  double lambda2, double tol = 1e-8, int max_iter = 2000);

enum class classic_solver { ridge_l, lasso, enet_l };

struct gcv_options {
  double tol = 1e-8;
  int max_iter = 2000;
  /// Secondary grid for enet_l's lambda2; empty = 5 log-spaced points spanning
  /// the same range as the primary grid.
  std::vector<double> lambda2_grid;
};

/// Default primary grid: 30 log-spaced lambdas over [1e-4, 1] * 2||K^T V||_inf.
std::vector<double> default_lambda_grid(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                        int points = 30);

/// Picks the grid lambda minimizing GCV(lambda) = m ||V - K J||^2 / (m - df)^2
/// with df = trace of the ridge hat matrix (ridge_l) or the nonzero count
/// (lasso, enet_l). Ties break toward larger lambda; grid points with df >= m
/// are skipped, and if every point degenerates that is an error. For enet_l
/// the search covers lambda_grid x lambda2_grid.
regularized_solution gcv_select(classic_solver which, const Eigen::MatrixXd& K,
                                const Eigen::VectorXd& V, const Eigen::SparseMatrix<double>& L,
                                const std::vector<double>& lambda_grid,
                                const gcv_options& opts = {});

} // namespace eegsl

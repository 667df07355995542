#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "eegsl/moea_core.hpp"

namespace eegsl {

/// Penalty-matched proximal modes for the threshold step.
enum class prox_mode { l0, l1, l2L };

/// Gradient of the data-fit term f(J) = ||V - K J||^2: returns 2 K^T (K J - V).
Eigen::VectorXd gradient_fit(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                             const Eigen::VectorXd& J);

/// Iterate history for the Barzilai-Borwein step estimate.
struct lsts_state {
  Eigen::VectorXd j_current, j_previous;
  Eigen::VectorXd grad_current, grad_previous;
  double beta = 1.0;         // previous estimate; the Lipschitz seed before any history
  bool has_history = false;  // false on the first iteration
};

/// BB1 estimate beta = s.y / s.s with s = j_current - j_previous and
/// y = grad_current - grad_previous, clamped to [1e-8, 1e12]. Without history
/// the seed is returned; s = 0 returns the previous beta unchanged.
double bb_beta(const lsts_state& state);

/// lambda_hat = ||V - K J||^2 / ||J||_1 for the cycle's best-fit estimate.
/// J = 0 raises an undefined-lambda error.
double lambda_hat(const Eigen::MatrixXd& K, const Eigen::VectorXd& V, const Eigen::VectorXd& J);

/// Proximal operator of a * g at v: l1 soft-thresholds each component at a;
/// l0 keeps components with u^2 > 2a; l2L solves (I + 2a L^T L) x = v by
/// conjugate gradient to 1e-10 relative residual (numeric error after 10n
/// iterations). L required for l2L, ignored otherwise.
Eigen::VectorXd prox_threshold(const Eigen::VectorXd& v, double a, prox_mode mode,
                               const Eigen::SparseMatrix<double>* L = nullptr);

struct lsts_options {
  int max_iter = 25;
  double tol = 1e-8;
};

struct lsts_result {
  Eigen::VectorXd j;
  int iterations = 0;
  bool skipped = false;  // lambda_hat undefined: J0 returned untouched
};

/// Threshold-descent refinement of J0: iterates J <- prox(J - grad/beta,
/// lambda_hat/beta) with BB step sizes, safeguarded by step halving (beta
/// doubling, at most 20 times) whenever the surrogate
/// F(J) = ||V - K J||^2 + lambda_hat * p(J) would increase. lambda_hat comes
/// from the override when given, else from J0 itself.
lsts_result lsts_descend(const Eigen::VectorXd& J0, const Eigen::MatrixXd& K,
                         const Eigen::VectorXd& V, prox_mode mode,
                         const lsts_options& opts = {},
                         const Eigen::SparseMatrix<double>* L = nullptr,
                         const double* lambda_hat_override = nullptr);

/// Refines every member of pop_cc into a new population of equal size.
/// lambda_hat is fixed for the whole cycle from the best-fit (lowest f0)
/// member; if that member is zero the search is skipped and pop_cc returned
/// unchanged. Each member moves only on its own support (thresholding may
/// shrink it); coordinates outside it stay frozen. Outputs are re-evaluated
/// under `model`.
population local_search_population(const population& pop_cc, const Eigen::MatrixXd& K,
                                   const Eigen::VectorXd& V, prox_mode mode,
                                   const penalty_model& model, const lsts_options& opts = {},
                                   const Eigen::SparseMatrix<double>* L = nullptr);

} // namespace eegsl

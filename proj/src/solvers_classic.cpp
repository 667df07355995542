#include "eegsl/solvers_classic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eegsl {

namespace {

void check_finite(const Eigen::MatrixXd& K, const Eigen::VectorXd& V) {
  require(K.allFinite(), errc::data, "solver: lead field has non-finite entries");
  require(V.allFinite(), errc::data, "solver: recording has non-finite entries");
}

double soft(double x, double a) {
  if (x > a) return x - a;
  if (x < -a) return x + a;
  return 0.0;
}

// Power iteration for the largest eigenvalue of the PSD operator
// v -> 2 K^T (K v) + 2 lambda2 L^T (L v). Deterministic start, 50 steps,
// stops when successive estimates agree to 1e-10 relative.
double power_lipschitz(const Eigen::MatrixXd& K, const Eigen::SparseMatrix<double>* L,
                       double lambda2) {
  const Eigen::Index n = K.cols();
  if (n == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  double lam = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = 2.0 * (K.transpose() * (K * v));
    if (L && lambda2 != 0.0) w += 2.0 * lambda2 * (L->transpose() * (*L * v));
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w) / v.dot(v);
    v = w / norm;
    if (it > 0 && std::abs(next - lam) <= 1e-10 * std::max(1.0, std::abs(next))) {
      lam = next;
      break;
    }
    lam = next;
  }
  return lam;
}

struct ridge_factorization {
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  bool jitter_applied = false;
};

// Factorizes K^T K + lambda L^T L, retrying with a 1e-12 identity jitter when
// the solve comes back unusable (singular normal equations).
ridge_factorization factor_ridge(const Eigen::MatrixXd& K, const Eigen::SparseMatrix<double>& L,
                                 double lambda, const Eigen::VectorXd& b) {
  Eigen::MatrixXd A = K.transpose() * K;
  if (lambda != 0.0) {
    require(L.rows() == K.cols() && L.cols() == K.cols(), errc::shape_mismatch,
            "solve_ridge_l: Laplacian must be n x n");
    A += lambda * Eigen::MatrixXd(L.transpose() * L);
  }
  ridge_factorization f;
  f.ldlt.compute(A);
  const Eigen::VectorXd d = f.ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  const Eigen::VectorXd x = f.ldlt.solve(b);
  const bool singular = dmax == 0.0 || d.minCoeff() <= 1e-12 * dmax;
  if (singular || !x.allFinite()) {
    A += 1e-12 * Eigen::MatrixXd::Identity(A.rows(), A.cols());
    f.ldlt.compute(A);
    f.jitter_applied = true;
  }
  return f;
}

regularized_solution prox_gradient(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                   const Eigen::SparseMatrix<double>* L, double lambda1,
                                   double lambda2, double tol, int max_iter) {
  check_finite(K, V);
  require(lambda1 >= 0.0 && lambda2 >= 0.0, errc::invalid_argument,
          "solver: lambdas must be >= 0");
  require(K.rows() == V.size(), errc::shape_mismatch, "solver: K rows must match V length");
  regularized_solution sol;
  sol.j = Eigen::VectorXd::Zero(K.cols());
  const double lip = power_lipschitz(K, L, lambda2);
  if (lip <= 0.0) return sol;  // zero operator: J = 0 is optimal
  const double step = 1.0 / lip;
  const double thresh = step * lambda1;
  sol.converged = false;
  Eigen::VectorXd next(sol.j.size());
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd grad = 2.0 * (K.transpose() * (K * sol.j - V));
    if (L && lambda2 != 0.0) grad += 2.0 * lambda2 * (L->transpose() * (*L * sol.j));
    double delta = 0.0;
    for (Eigen::Index i = 0; i < sol.j.size(); ++i) {
      next[i] = soft(sol.j[i] - step * grad[i], thresh);
      delta = std::max(delta, std::abs(next[i] - sol.j[i]));
    }
    sol.iterations = it;
    if (delta < tol) {
      // Keep the previous iterate: exact fixed points stay bit-exact.
      sol.converged = true;
      break;
    }
    sol.j.swap(next);
  }
  return sol;
}

} // namespace

Eigen::VectorXd pseudoinverse_solution(const Eigen::MatrixXd& K, const Eigen::VectorXd& V) {
  check_finite(K, V);
  require(K.rows() == V.size(), errc::shape_mismatch,
          "pseudoinverse_solution: K rows must match V length");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  return svd.solve(V);
}

double gradient_lipschitz(const Eigen::MatrixXd& K) { return power_lipschitz(K, nullptr, 0.0); }

regularized_solution solve_ridge_l(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                   const Eigen::SparseMatrix<double>& L, double lambda) {
  check_finite(K, V);
  require(lambda >= 0.0, errc::invalid_argument, "solve_ridge_l: lambda must be >= 0");
  require(K.rows() == V.size(), errc::shape_mismatch, "solve_ridge_l: K rows must match V");
  const Eigen::VectorXd b = K.transpose() * V;
  const ridge_factorization f = factor_ridge(K, L, lambda, b);
  regularized_solution sol;
  sol.j = f.ldlt.solve(b);
  sol.lambdas = {lambda};
  sol.jitter_applied = f.jitter_applied;
  sol.iterations = 1;
  return sol;
}

regularized_solution solve_lasso(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                 double lambda, double tol, int max_iter) {
  regularized_solution sol = prox_gradient(K, V, nullptr, lambda, 0.0, tol, max_iter);
  sol.lambdas = {lambda};
  return sol;
}

regularized_solution solve_enet_l(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                  const Eigen::SparseMatrix<double>& L, double lambda1,
                                  double lambda2, double tol, int max_iter) {
  regularized_solution sol = prox_gradient(K, V, &L, lambda1, lambda2, tol, max_iter);
  sol.lambdas = {lambda1, lambda2};
  return sol;
}

std::vector<double> default_lambda_grid(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                                        int points) {
  require(points >= 1, errc::invalid_argument, "default_lambda_grid: need at least one point");
  const double lmax = 2.0 * (K.transpose() * V).cwiseAbs().maxCoeff();
  if (lmax <= 0.0) return {0.0};
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lmax;
    return grid;
  }
  const double lo = std::log10(1e-4 * lmax), hi = std::log10(lmax);
  for (int i = 0; i < points; ++i)
    grid[i] = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
  return grid;
}

regularized_solution gcv_select(classic_solver which, const Eigen::MatrixXd& K,
                                const Eigen::VectorXd& V, const Eigen::SparseMatrix<double>& L,
                                const std::vector<double>& lambda_grid, const gcv_options& opts) {
  require(!lambda_grid.empty(), errc::invalid_argument, "gcv_select: empty lambda grid");
  check_finite(K, V);
  const double m = static_cast<double>(K.rows());

  std::vector<double> grid = lambda_grid;
  std::sort(grid.begin(), grid.end());

  std::vector<double> grid2;
  if (which == classic_solver::enet_l) {
    grid2 = opts.lambda2_grid;
    if (grid2.empty()) {
      const double lo = std::log10(std::max(grid.front(), 1e-300)),
                   hi = std::log10(std::max(grid.back(), 1e-299));
      for (int i = 0; i < 5; ++i) grid2.push_back(std::pow(10.0, lo + (hi - lo) * i / 4.0));
    }
    std::sort(grid2.begin(), grid2.end());
  } else {
    grid2 = {0.0};
  }

  regularized_solution best;
  double best_score = std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<std::pair<double, double>> curve;

  for (double l1 : grid) {
    for (double l2 : grid2) {
      regularized_solution cand;
      double df = 0.0;
      switch (which) {
        case classic_solver::ridge_l: {
          const Eigen::VectorXd b = K.transpose() * V;
          const ridge_factorization f = factor_ridge(K, L, l1, b);
          cand.j = f.ldlt.solve(b);
          cand.jitter_applied = f.jitter_applied;
          cand.lambdas = {l1};
          cand.iterations = 1;
          const Eigen::MatrixXd X = f.ldlt.solve(Eigen::MatrixXd(K.transpose()));
          for (Eigen::Index i = 0; i < K.rows(); ++i) df += K.row(i).dot(X.col(i));
          break;
        }
        case classic_solver::lasso:
          cand = solve_lasso(K, V, l1, opts.tol, opts.max_iter);
          df = static_cast<double>((cand.j.array() != 0.0).count());
          break;
        case classic_solver::enet_l:
          cand = solve_enet_l(K, V, L, l1, l2, opts.tol, opts.max_iter);
          df = static_cast<double>((cand.j.array() != 0.0).count());
          break;
      }
      if (df >= m) continue;  // saturated fit: GCV undefined here
      const double rss = (V - K * cand.j).squaredNorm();
      const double score = m * rss / ((m - df) * (m - df));
      curve.emplace_back(l1, score);
      // Ascending iteration order + non-strict comparison = ties go to the
      // larger lambda.
      if (!found || score <= best_score) {
        best = std::move(cand);
        best_score = score;
        found = true;
      }
    }
  }
  require(found, errc::degenerate_gcv,
          "gcv_select: every grid point saturates the fit (df >= m)");
  best.gcv_curve = std::move(curve);
  return best;
}

} // namespace eegsl

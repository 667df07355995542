#include "eegsl/local_search.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <vector>

#include "eegsl/errors.hpp"
#include "eegsl/solvers_classic.hpp"

namespace eegsl {

namespace {

constexpr double kBetaLo = 1e-8;
constexpr double kBetaHi = 1e12;

Eigen::VectorXd prox_l2_structured(const Eigen::VectorXd& v, double a,
                                   const Eigen::SparseMatrix<double>& L) {
  if (a == 0.0) return v;
  const int n = static_cast<int>(v.size());
  Eigen::SparseMatrix<double> op(n, n);
  op.setIdentity();
  op = op + Eigen::SparseMatrix<double>(2.0 * a * (L.transpose() * L));

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IdentityPreconditioner>
      cg;
  cg.setTolerance(1e-10);
  cg.setMaxIterations(10 * n);
  cg.compute(op);
  Eigen::VectorXd x = cg.solve(v);
  require(cg.info() == Eigen::Success, errc::numeric,
          "structured prox: conjugate gradient did not reach 1e-10 relative residual");
  return x;
}

/// Penalty value matching each prox mode (exact nonzero count for l0).
double mode_penalty(const Eigen::VectorXd& j, prox_mode mode,
                    const Eigen::SparseMatrix<double>* L) {
  switch (mode) {
    case prox_mode::l1:
      return j.lpNorm<1>();
    case prox_mode::l0:
      return static_cast<double>((j.array() != 0.0).count());
    case prox_mode::l2L:
      return (*L * j).squaredNorm();
  }
  fail(errc::invalid_argument, "unknown prox mode");
}

/// Columns `keep` of a column-major sparse matrix.
Eigen::SparseMatrix<double> column_subset(const Eigen::SparseMatrix<double>& L,
                                          const std::vector<int>& keep) {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t c = 0; c < keep.size(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(L, keep[c]); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(c), it.value());
    }
  }
  Eigen::SparseMatrix<double> out(L.rows(), static_cast<int>(keep.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

} // namespace

Eigen::VectorXd gradient_fit(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                             const Eigen::VectorXd& J) {
  require(K.rows() == V.size(), errc::shape_mismatch, "gradient_fit: K rows != V size");
  require(K.cols() == J.size(), errc::shape_mismatch, "gradient_fit: K cols != J size");
  return 2.0 * (K.transpose() * (K * J - V));
}

double bb_beta(const lsts_state& state) {
  if (!state.has_history) return std::clamp(state.beta, kBetaLo, kBetaHi);
  const Eigen::VectorXd s = state.j_current - state.j_previous;
  const double sts = s.squaredNorm();
  if (sts == 0.0) return state.beta;
  const Eigen::VectorXd y = state.grad_current - state.grad_previous;
  return std::clamp(s.dot(y) / sts, kBetaLo, kBetaHi);
}

double lambda_hat(const Eigen::MatrixXd& K, const Eigen::VectorXd& V, const Eigen::VectorXd& J) {
  require(K.rows() == V.size(), errc::shape_mismatch, "lambda_hat: K rows != V size");
  require(K.cols() == J.size(), errc::shape_mismatch, "lambda_hat: K cols != J size");
  const double l1 = J.lpNorm<1>();
  if (l1 == 0.0) fail(errc::undefined_lambda, "lambda_hat: zero estimate");
  return (V - K * J).squaredNorm() / l1;
}

Eigen::VectorXd prox_threshold(const Eigen::VectorXd& v, double a, prox_mode mode,
                               const Eigen::SparseMatrix<double>* L) {
  require(a >= 0.0, errc::invalid_argument, "prox_threshold: negative threshold");
  switch (mode) {
    case prox_mode::l1: {
      Eigen::VectorXd out(v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double u = v[i];
        out[i] = u > a ? u - a : (u < -a ? u + a : 0.0);
      }
      return out;
    }
    case prox_mode::l0: {
      Eigen::VectorXd out(v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i] * v[i] > 2.0 * a ? v[i] : 0.0;
      return out;
    }
    case prox_mode::l2L: {
      require(L != nullptr, errc::invalid_argument, "prox_threshold: l2L needs a structure matrix");
      require(L->cols() == v.size(), errc::shape_mismatch,
              "prox_threshold: structure matrix columns != vector size");
      return prox_l2_structured(v, a, *L);
    }
  }
  fail(errc::invalid_argument, "unknown prox mode");
}

lsts_result lsts_descend(const Eigen::VectorXd& J0, const Eigen::MatrixXd& K,
                         const Eigen::VectorXd& V, prox_mode mode, const lsts_options& opts,
                         const Eigen::SparseMatrix<double>* L, const double* lambda_hat_override) {
  require(K.rows() == V.size(), errc::shape_mismatch, "lsts_descend: K rows != V size");
  require(K.cols() == J0.size(), errc::shape_mismatch, "lsts_descend: K cols != J0 size");
  require(opts.max_iter >= 1, errc::invalid_argument, "lsts_descend: max_iter must be >= 1");
  require(opts.tol > 0.0, errc::invalid_argument, "lsts_descend: tol must be positive");
  if (mode == prox_mode::l2L) {
    require(L != nullptr, errc::invalid_argument, "lsts_descend: l2L needs a structure matrix");
    require(L->cols() == J0.size(), errc::shape_mismatch,
            "lsts_descend: structure matrix columns != J0 size");
  }

  lsts_result res;
  res.j = J0;
  if (J0.size() == 0) return res;

  double lam;
  if (lambda_hat_override != nullptr) {
    lam = *lambda_hat_override;
    require(lam >= 0.0 && std::isfinite(lam), errc::invalid_argument,
            "lsts_descend: lambda override must be finite and non-negative");
  } else if (J0.lpNorm<1>() == 0.0) {
    res.skipped = true;  // lambda_hat undefined on the all-zero start
    return res;
  } else {
    lam = lambda_hat(K, V, J0);
    if (!std::isfinite(lam)) {
      res.skipped = true;  // overflowed residual: no usable threshold
      return res;
    }
  }

  lsts_state st;
  st.beta = gradient_lipschitz(K);
  st.has_history = false;

  Eigen::VectorXd j = J0;
  Eigen::VectorXd grad = gradient_fit(K, V, j);
  double f_cur = (V - K * j).squaredNorm() + lam * mode_penalty(j, mode, L);

  for (int it = 0; it < opts.max_iter; ++it) {
    double beta = bb_beta(st);
    Eigen::VectorXd cand;
    double f_cand = 0.0;
    bool accepted = false;
    for (int halving = 0; halving <= 20; ++halving) {
      cand = prox_threshold(j - grad / beta, lam / beta, mode, L);
      f_cand = (V - K * cand).squaredNorm() + lam * mode_penalty(cand, mode, L);
      if (f_cand <= f_cur) {
        accepted = true;
        break;
      }
      beta *= 2.0;  // surrogate increased: halve the step
    }
    if (!accepted) break;

    const double delta = (cand - j).lpNorm<Eigen::Infinity>();
    st.j_previous = j;
    st.grad_previous = grad;
    j = cand;
    grad = gradient_fit(K, V, j);
    st.j_current = j;
    st.grad_current = grad;
    st.beta = beta;
    st.has_history = true;
    f_cur = f_cand;
    ++res.iterations;
    if (delta < opts.tol) break;
  }

  res.j = j;
  return res;
}

population local_search_population(const population& pop_cc, const Eigen::MatrixXd& K,
                                   const Eigen::VectorXd& V, prox_mode mode,
                                   const penalty_model& model, const lsts_options& opts,
                                   const Eigen::SparseMatrix<double>* L) {
  require(!pop_cc.members.empty(), errc::invalid_argument,
          "local_search_population: empty population");
  if (mode == prox_mode::l2L) {
    require(L != nullptr, errc::invalid_argument,
            "local_search_population: l2L needs a structure matrix");
  }

  int best = -1;
  for (int i = 0; i < pop_cc.size(); ++i) {
    const individual& ind = pop_cc.members[i];
    require(ind.evaluated(), errc::state, "local_search_population: member not evaluated");
    if (best < 0 || ind.objectives[0] < pop_cc.members[best].objectives[0]) best = i;
  }
  const Eigen::VectorXd& j_cc = pop_cc.members[best].coeffs;
  if (j_cc.lpNorm<1>() == 0.0) return pop_cc;  // lambda_hat undefined: skip this cycle
  const double lam = lambda_hat(K, V, j_cc);
  if (!std::isfinite(lam)) return pop_cc;  // overflowed residual: skip this cycle too

  population out = pop_cc;
  for (individual& ind : out.members) {
    std::vector<int> mask;
    for (Eigen::Index i = 0; i < ind.coeffs.size(); ++i) {
      if (ind.coeffs[i] != 0.0) mask.push_back(static_cast<int>(i));
    }
    if (mask.empty()) continue;  // nothing movable: coordinates off-support stay frozen

    const int s = static_cast<int>(mask.size());
    Eigen::MatrixXd k_sub(K.rows(), s);
    Eigen::VectorXd j_sub(s);
    for (int c = 0; c < s; ++c) {
      k_sub.col(c) = K.col(mask[c]);
      j_sub[c] = ind.coeffs[mask[c]];
    }
    Eigen::SparseMatrix<double> l_sub;
    if (mode == prox_mode::l2L) l_sub = column_subset(*L, mask);

    const lsts_result r = lsts_descend(j_sub, k_sub, V, mode, opts,
                                       mode == prox_mode::l2L ? &l_sub : nullptr, &lam);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(ind.coeffs.size());
    for (int c = 0; c < s; ++c) full[mask[c]] = r.j[c];
    ind.coeffs = std::move(full);
    ind.objectives = evaluate(K, V, ind.coeffs, model);
    ind.rank = -1;
    ind.crowding = 0.0;
  }
  return out;
}

} // namespace eegsl

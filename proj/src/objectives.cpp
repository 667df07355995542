#include "eegsl/objectives.hpp"

#include <cmath>
#include <string>

namespace eegsl {

double residual_ss(const Eigen::MatrixXd& K, const Eigen::VectorXd& V, const Eigen::VectorXd& J) {
  require(K.cols() == J.size() && K.rows() == V.size(), errc::shape_mismatch,
          "residual_ss: dimension mismatch");
  return (V - K * J).squaredNorm();
}

double penalty(const Eigen::VectorXd& J, const penalty_term& term, double l0_epsilon) {
  Eigen::VectorXd theta;
  if (term.L) {
    require(term.L->cols() == J.size(), errc::shape_mismatch,
            "penalty: structure matrix does not match J");
    theta = *term.L * J;
  } else {
    theta = J;
  }
  switch (term.g) {
    case penalty_transform::abs:
      return theta.lpNorm<1>();
    case penalty_transform::square:
      return theta.squaredNorm();
    case penalty_transform::l0_indicator: {
      const double mx = theta.cwiseAbs().maxCoeff();
      if (mx == 0.0) return 0.0;
      const double thresh = l0_epsilon * mx;
      int count = 0;
      for (Eigen::Index i = 0; i < theta.size(); ++i)
        if (std::abs(theta[i]) > thresh) ++count;
      return static_cast<double>(count);
    }
  }
  fail(errc::invalid_argument, "penalty: unknown transform");
}

objective_vector evaluate(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                          const Eigen::VectorXd& J, const penalty_model& model) {
  require(!model.terms.empty(), errc::invalid_argument, "evaluate: penalty model has no terms");
  require(model.l0_epsilon > 0.0 && model.l0_epsilon <= 1e-2, errc::invalid_argument,
          "evaluate: l0_epsilon must lie in (0, 1e-2]");
  objective_vector out;
  out.reserve(model.terms.size() + 1);
  out.push_back(residual_ss(K, V, J));
  for (const auto& term : model.terms) out.push_back(penalty(J, term, model.l0_epsilon));
  return out;
}

penalty_model make_penalty_model(std::string_view name,
                                 std::shared_ptr<const Eigen::SparseMatrix<double>> laplacian) {
  penalty_model model;
  auto need_l = [&]() {
    require(laplacian != nullptr, errc::invalid_argument,
            "make_penalty_model: model '" + std::string(name) + "' needs a Laplacian");
    return laplacian;
  };
  if (name == "l0") {
    model.terms.push_back({penalty_transform::l0_indicator, nullptr, std::nullopt});
  } else if (name == "l1") {
    model.terms.push_back({penalty_transform::abs, nullptr, std::nullopt});
  } else if (name == "l2L") {
    model.terms.push_back({penalty_transform::square, need_l(), std::nullopt});
  } else if (name == "enetL") {
    model.terms.push_back({penalty_transform::abs, nullptr, std::nullopt});
    model.terms.push_back({penalty_transform::square, need_l(), std::nullopt});
  } else {
    fail(errc::invalid_argument, "make_penalty_model: unknown model '" + std::string(name) +
                                     "', expected l0 | l1 | l2L | enetL");
  }
  return model;
}

} // namespace eegsl

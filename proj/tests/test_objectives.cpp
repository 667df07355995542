#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "eegsl/headmodel.hpp"
#include "eegsl/objectives.hpp"
#include "eegsl/rng.hpp"

using namespace eegsl;

namespace {

std::shared_ptr<const Eigen::SparseMatrix<double>> path_laplacian(int n) {
  source_space space;
  space.positions.resize(n, 3);
  space.positions.setZero();
  for (int i = 0; i < n; ++i) space.positions(i, 0) = i;
  space.roi_labels.assign(n, 0);
  space.roi_count = 1;
  space.adjacency.resize(n);
  for (int i = 0; i + 1 < n; ++i) {
    space.adjacency[i].push_back(i + 1);
    space.adjacency[i + 1].push_back(i);
  }
  return std::make_shared<Eigen::SparseMatrix<double>>(graph_laplacian(space).matrix);
}

Eigen::MatrixXd random_matrix(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd K(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = rng.normal();
  return K;
}

Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

} // namespace

TEST_CASE("residual_ss") {
  const Eigen::MatrixXd K = random_matrix(5, 7, 1);
  const Eigen::VectorXd J = random_vector(7, 2);

  SUBCASE("exact solution gives zero") {
    const Eigen::VectorXd V = K * J;
    CHECK(residual_ss(K, V, J) == 0.0);
  }

  SUBCASE("J = 0 gives the squared norm of V") {
    const Eigen::VectorXd V = random_vector(5, 3);
    CHECK(residual_ss(K, V, Eigen::VectorXd::Zero(7)) == doctest::Approx(V.squaredNorm()));
  }

  SUBCASE("matches a naive triple-loop oracle") {
    const Eigen::VectorXd V = random_vector(5, 4);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
      double row = V[i];
      for (int j = 0; j < 7; ++j) row -= K(i, j) * J[j];
      acc += row * row;
    }
    CHECK(residual_ss(K, V, J) == doctest::Approx(acc).epsilon(1e-12));
  }

  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(residual_ss(K, random_vector(4, 5), J), Error);
  }
}

TEST_CASE("penalty transforms") {
  Eigen::VectorXd J(3);
  J << 1.0, -2.0, 0.0;

  SUBCASE("abs with identity is the l1 norm") {
    CHECK(penalty(J, {penalty_transform::abs, nullptr, {}}, 1e-6) == 3.0);
  }

  SUBCASE("l0 counts relative nonzeros") {
    CHECK(penalty(J, {penalty_transform::l0_indicator, nullptr, {}}, 1e-6) == 2.0);
    CHECK(penalty(Eigen::VectorXd::Zero(4), {penalty_transform::l0_indicator, nullptr, {}},
                  1e-6) == 0.0);
  }

  SUBCASE("square with a path Laplacian matches the naive ||LJ||^2 oracle") {
    const auto L = path_laplacian(6);
    const Eigen::VectorXd x = random_vector(6, 9);
    const Eigen::MatrixXd Ld(*L);
    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
      double row = 0.0;
      for (int j = 0; j < 6; ++j) row += Ld(i, j) * x[j];
      acc += row * row;
    }
    CHECK(penalty(x, {penalty_transform::square, L, {}}, 1e-6) ==
          doctest::Approx(acc).epsilon(1e-12));
  }
}

TEST_CASE("penalty scale laws") {
  const Eigen::VectorXd J = random_vector(10, 17);
  const penalty_term abs_t{penalty_transform::abs, nullptr, {}};
  const penalty_term sq_t{penalty_transform::square, path_laplacian(10), {}};
  const penalty_term l0_t{penalty_transform::l0_indicator, nullptr, {}};
  for (double c : {2.0, -3.0, 0.25}) {
    CHECK(penalty(c * J, abs_t, 1e-6) ==
          doctest::Approx(std::abs(c) * penalty(J, abs_t, 1e-6)).epsilon(1e-12));
    CHECK(penalty(c * J, sq_t, 1e-6) ==
          doctest::Approx(c * c * penalty(J, sq_t, 1e-6)).epsilon(1e-12));
    CHECK(penalty(c * J, l0_t, 1e-6) == penalty(J, l0_t, 1e-6));
  }
}

TEST_CASE("evaluate assembles the objective vector") {
  const Eigen::MatrixXd K = Eigen::MatrixXd::Identity(4, 4);
  const Eigen::VectorXd V = random_vector(4, 21);

  SUBCASE("lasso model at J = 0") {
    const auto model = make_penalty_model("l1", nullptr);
    const auto f = evaluate(K, V, Eigen::VectorXd::Zero(4), model);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == doctest::Approx(V.squaredNorm()));
    CHECK(f[1] == 0.0);
  }

  SUBCASE("l0 model on an exact punctual inverse pair") {
    Eigen::VectorXd j = Eigen::VectorXd::Zero(4);
    j[2] = 5.0;
    const auto model = make_penalty_model("l0", nullptr);
    const auto f = evaluate(K, K * j, j, model);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 1.0);
  }

  SUBCASE("two-term model gives a length-3 vector matching the parts") {
    const auto L = path_laplacian(4);
    const auto model = make_penalty_model("enetL", L);
    const Eigen::VectorXd j = random_vector(4, 5);
    const auto f = evaluate(K, V, j, model);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == doctest::Approx(residual_ss(K, V, j)));
    CHECK(f[1] == doctest::Approx(penalty(j, model.terms[0], model.l0_epsilon)));
    CHECK(f[2] == doctest::Approx(penalty(j, model.terms[1], model.l0_epsilon)));
    for (double v : f) CHECK(v >= 0.0);
  }
}

TEST_CASE("named penalty models") {
  const auto L = path_laplacian(5);
  CHECK(make_penalty_model("l0", nullptr).terms.size() == 1);
  CHECK(make_penalty_model("l1", nullptr).terms.size() == 1);
  CHECK(make_penalty_model("l2L", L).terms.size() == 1);
  CHECK(make_penalty_model("enetL", L).terms.size() == 2);
  CHECK_THROWS_AS(make_penalty_model("l2L", nullptr), Error);
  CHECK_THROWS_AS(make_penalty_model("ridge", L), Error);
}

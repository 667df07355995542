#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eegsl/metrics.hpp"
#include "eegsl/rng.hpp"

using namespace eegsl;

namespace {

source_space two_point_space() {
  source_space space;
  space.positions.resize(2, 3);
  space.positions << 0.0, 0.0, 0.0, 1.0, 0.0, 0.0;
  space.roi_labels = {0, 1};
  space.roi_count = 2;
  space.adjacency = {{1}, {0}};
  return space;
}

/// Brute-force diameter, written independently of the library routine.
double brute_diameter(const source_space& space) {
  double best = 0.0;
  for (int a = 0; a < space.size(); ++a) {
    for (int b = 0; b < space.size(); ++b) {
      const double d = (space.positions.row(a) - space.positions.row(b)).norm();
      if (d > best) best = d;
    }
  }
  return best;
}

} // namespace

TEST_CASE("source_space_diameter matches brute force") {
  const source_space space = build_source_space(60, 0.8, 4, 301);
  CHECK(source_space_diameter(space) == brute_diameter(space));
  CHECK(source_space_diameter(two_point_space()) == 1.0);
}

TEST_CASE("localization is perfect for identical estimates and zero for opposite poles") {
  const source_space space = two_point_space();
  Eigen::VectorXd j_true(2), j_est(2);
  j_true << 2.0, 0.5;

  auto [d0, s0] = localization_error(j_true, j_true, space);
  CHECK(d0 == 0.0);
  CHECK(s0 == 1.0);

  j_est << 0.5, 2.0;  // argmax at the diametrically opposite point
  auto [d1, s1] = localization_error(j_true, j_est, space);
  CHECK(d1 == 1.0);
  CHECK(s1 == 0.0);
}

TEST_CASE("localization of a grid-neighbor estimate matches the direct distance") {
  const source_space space = build_source_space(100, 0.8, 4, 302);
  const int a = 17;
  const int b = space.adjacency[a].front();  // one grid-neighbor away
  Eigen::VectorXd j_true = Eigen::VectorXd::Zero(100);
  Eigen::VectorXd j_est = Eigen::VectorXd::Zero(100);
  j_true[a] = 3.0;
  j_est[b] = -1.0;

  const double spacing = (space.positions.row(a) - space.positions.row(b)).norm();
  const double diameter = brute_diameter(space);
  auto [d, score] = localization_error(j_true, j_est, space);
  CHECK(d == doctest::Approx(spacing).epsilon(1e-15));
  CHECK(score == doctest::Approx(1.0 - spacing / diameter).epsilon(1e-15));
  CHECK(score >= 0.0);
  CHECK(score <= 1.0);
}

TEST_CASE("localization handles the zero estimate and rejects zero truth") {
  const source_space space = two_point_space();
  Eigen::VectorXd j_true(2);
  j_true << 1.0, 0.0;
  auto [d, score] = localization_error(j_true, Eigen::VectorXd::Zero(2), space);
  CHECK(score == 0.0);
  CHECK(d == source_space_diameter(space));
  try {
    localization_error(Eigen::VectorXd::Zero(2), j_true, space);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::data);
  }
}

TEST_CASE("visibility is the normalized estimate magnitude at the true site") {
  Eigen::VectorXd j_true(4), j_est(4);
  j_true << 0.0, 5.0, 0.0, 0.0;

  CHECK(visibility(j_true, j_true) == 1.0);

  j_est << 2.0, 0.0, 1.0, 0.0;  // nothing at the true site
  CHECK(visibility(j_true, j_est) == 0.0);

  j_est << 0.0, 0.5, 1.0, 0.0;  // half of the estimate's maximum
  CHECK(visibility(j_true, j_est) == 0.5);

  CHECK(visibility(j_true, Eigen::VectorXd::Zero(4)) == 0.0);
  CHECK_THROWS_AS(visibility(Eigen::VectorXd::Zero(4), j_est), Error);
}

TEST_CASE("spatial resolution is the Jaccard index of half-max supports") {
  Eigen::VectorXd j_true(6), j_est(6);
  j_true << 0.0, 4.0, 0.0, 0.0, 0.0, 0.0;

  CHECK(spatial_resolution(j_true, j_true) == 1.0);

  j_est << 1.0, 0.0, 0.0, 0.0, 0.0, 0.0;  // disjoint supports
  CHECK(spatial_resolution(j_true, j_est) == 0.0);

  // punctual truth; estimate above half-max at the true point plus 3 others
  j_est << 0.0, 1.0, 0.8, 0.7, 0.6, 0.1;
  CHECK(spatial_resolution(j_true, j_est) == 0.25);

  CHECK(spatial_resolution(j_true, Eigen::VectorXd::Zero(6)) == 0.0);
}

TEST_CASE("half-max membership uses >= at the boundary") {
  Eigen::VectorXd j_true(2), j_est(2);
  j_true << 2.0, 1.0;  // exactly half the maximum: in the support under >=
  j_est << 2.0, 2.0;
  // supports {0,1} and {0,1}; a strict > rule would give {0} vs {0,1} = 1/2
  CHECK(spatial_resolution(j_true, j_est) == 1.0);
  j_est << 2.0, 0.999;  // just below half: dropped from the estimate support
  CHECK(spatial_resolution(j_true, j_est) == 0.5);
}

TEST_CASE("all scores are invariant under positive rescaling of the estimate") {
  const source_space space = build_source_space(40, 0.8, 4, 303);
  Rng rng(304);
  Eigen::VectorXd j_true = Eigen::VectorXd::Zero(40);
  j_true[7] = 2.0;
  j_true[8] = 1.5;
  Eigen::VectorXd j_est(40);
  for (int i = 0; i < 40; ++i) j_est[i] = rng.normal();

  const auto [d0, loc0] = localization_error(j_true, j_est, space);
  const double vis0 = visibility(j_true, j_est);
  const double res0 = spatial_resolution(j_true, j_est);
  for (double c : {0.5, 4.0, 1024.0}) {  // powers of two rescale exactly
    const Eigen::VectorXd scaled = c * j_est;
    const auto [d1, loc1] = localization_error(j_true, scaled, space);
    CHECK(d1 == d0);
    CHECK(loc1 == loc0);
    CHECK(visibility(j_true, scaled) == vis0);
    CHECK(spatial_resolution(j_true, scaled) == res0);
  }
  const Eigen::VectorXd scaled = 3.0 * j_est;
  CHECK(visibility(j_true, scaled) == doctest::Approx(vis0).epsilon(1e-12));
  CHECK(spatial_resolution(j_true, scaled) == doctest::Approx(res0).epsilon(1e-12));
}

TEST_CASE("evaluate_all bundles the standalone indicators") {
  const source_space space = build_source_space(30, 0.8, 3, 305);
  scenario scen;
  scen.j_true = Eigen::VectorXd::Zero(30);
  scen.j_true[4] = 3.0;
  scen.j_true[5] = 2.0;

  const metrics_report perfect = evaluate_all(scen, scen.j_true, space);
  CHECK(perfect.localization_score == 1.0);
  CHECK(perfect.visibility_score == 1.0);
  CHECK(perfect.spatial_resolution_score == 1.0);
  CHECK(perfect.raw_distance == 0.0);

  const metrics_report zero = evaluate_all(scen, Eigen::VectorXd::Zero(30), space);
  CHECK(zero.localization_score == 0.0);
  CHECK(zero.visibility_score == 0.0);
  CHECK(zero.spatial_resolution_score == 0.0);

  Rng rng(306);
  Eigen::VectorXd j_est(30);
  for (int i = 0; i < 30; ++i) j_est[i] = rng.normal();
  const metrics_report mixed = evaluate_all(scen, j_est, space);
  const auto [d, loc] = localization_error(scen.j_true, j_est, space);
  CHECK(mixed.raw_distance == d);
  CHECK(mixed.localization_score == loc);
  CHECK(mixed.visibility_score == visibility(scen.j_true, j_est));
  CHECK(mixed.spatial_resolution_score == spatial_resolution(scen.j_true, j_est));
  CHECK(mixed.localization_score >= 0.0);
  CHECK(mixed.localization_score <= 1.0);
  CHECK(mixed.visibility_score >= 0.0);
  CHECK(mixed.visibility_score <= 1.0);
}

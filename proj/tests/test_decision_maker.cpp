#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "eegsl/decision_maker.hpp"
#include "eegsl/rng.hpp"

using namespace eegsl;

namespace {

/// Minimal source space: positions on a line, explicit ROI labels.
source_space make_space(const std::vector<int>& labels, int roi_count) {
  source_space space;
  const int n = static_cast<int>(labels.size());
  space.positions.resize(n, 3);
  space.positions.setZero();
  for (int i = 0; i < n; ++i) space.positions(i, 0) = i;
  space.roi_labels = labels;
  space.roi_count = roi_count;
  space.adjacency.assign(n, {});
  return space;
}

individual make_member(const std::vector<double>& coeffs, double f0, double f1) {
  individual ind;
  ind.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  ind.objectives = {f0, f1};
  return ind;
}

/// Brute-force knee: max perpendicular distance to the endpoint chord over
/// the normalized raw points themselves.
int brute_knee(const std::vector<std::array<double, 2>>& pts) {
  double x0 = pts[0][0], x1 = pts[0][0], y0 = pts[0][1], y1 = pts[0][1];
  for (const auto& p : pts) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
  int lo = 0, hi = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i][0] < pts[lo][0]) lo = static_cast<int>(i);
    if (pts[i][0] > pts[hi][0]) hi = static_cast<int>(i);
  }
  const double ax = (pts[lo][0] - x0) / (x1 - x0), ay = (pts[lo][1] - y0) / (y1 - y0);
  const double bx = (pts[hi][0] - x0) / (x1 - x0), by = (pts[hi][1] - y0) / (y1 - y0);
  const double len = std::hypot(bx - ax, by - ay);
  int best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double px = (pts[i][0] - x0) / (x1 - x0), py = (pts[i][1] - y0) / (y1 - y0);
    const double d = std::abs((bx - ax) * (py - ay) - (by - ay) * (px - ax)) / len;
    if (d > best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

} // namespace

TEST_CASE("cant_rep counts supported members per ROI") {
  const source_space space = make_space({0, 0, 1, 1}, 2);
  population front;
  front.members.push_back(make_member({1.0, 0.0, 0.0, 0.0}, 3.0, 1.0));  // ROI 0 only
  front.members.push_back(make_member({0.5, 0.0, 0.7, 0.0}, 2.0, 2.0));  // ROI 0 and 1
  front.members.push_back(make_member({0.0, 0.0, 0.0, 0.9}, 1.0, 3.0));  // ROI 1 only

  CHECK(cant_rep(front, space, 1e-6, 0) == 2);
  CHECK(cant_rep(front, space, 1e-6, 1) == 2);
  const std::vector<int> counts = cant_rep_all(front, space, 1e-6);
  REQUIRE(counts.size() == 2);
  CHECK(counts[0] == 2);
  CHECK(counts[1] == 2);
  CHECK_THROWS_AS(cant_rep(front, space, 1e-6, 2), Error);
}

TEST_CASE("cant_rep honors the relative l0 threshold") {
  const source_space space = make_space({0, 1}, 2);
  population front;
  front.members.push_back(make_member({1.0, 1e-9}, 1.0, 1.0));  // second coord below 1e-6 * max
  CHECK(cant_rep(front, space, 1e-6, 0) == 1);
  CHECK(cant_rep(front, space, 1e-6, 1) == 0);
}

TEST_CASE("cant_rep extremes") {
  const source_space space = make_space({0, 0, 1}, 2);
  population front;
  for (int i = 0; i < 4; ++i) front.members.push_back(make_member({1.0, 0.5, 0.0}, 1.0, 1.0));
  CHECK(cant_rep(front, space, 1e-6, 0) == 4);  // every member supported there
  CHECK(cant_rep(front, space, 1e-6, 1) == 0);  // empty intersection for all
}

TEST_CASE("select_roi takes the majority ROI with low-index ties") {
  const source_space space = make_space({0, 0, 1, 1}, 2);
  population front;
  front.members.push_back(make_member({1.0, 0.0, 0.0, 0.0}, 3.0, 1.0));
  front.members.push_back(make_member({0.5, 0.0, 0.7, 0.0}, 2.0, 2.0));
  front.members.push_back(make_member({0.0, 0.0, 0.0, 0.9}, 1.0, 3.0));
  CHECK(select_roi(front, space, 1e-6) == 0);  // counts (2, 2): tie to the lower index

  front.members.push_back(make_member({0.0, 0.0, 0.3, 0.0}, 0.5, 4.0));
  CHECK(select_roi(front, space, 1e-6) == 1);  // counts (2, 3)
}

TEST_CASE("select_roi fails when no member has active support") {
  const source_space space = make_space({0, 1}, 2);
  population front;
  front.members.push_back(make_member({0.0, 0.0}, 1.0, 1.0));
  try {
    select_roi(front, space, 1e-6);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::no_active_solution);
  }
}

TEST_CASE("filter_by_roi keeps supported members sorted by data fit") {
  const source_space space = make_space({0, 0, 1, 1}, 2);
  population front;
  front.members.push_back(make_member({1.0, 0.0, 0.0, 0.0}, 3.0, 1.0));
  front.members.push_back(make_member({0.5, 0.0, 0.7, 0.0}, 2.0, 2.0));
  front.members.push_back(make_member({0.0, 0.0, 0.0, 0.9}, 1.0, 3.0));

  const population sub = filter_by_roi(front, space, 1e-6, 0);
  REQUIRE(sub.size() == 2);
  CHECK(sub.members[0].objectives[0] == 2.0);  // ascending f0
  CHECK(sub.members[1].objectives[0] == 3.0);

  const population all = filter_by_roi(front, space, 1e-6, 1);
  REQUIRE(all.size() == 2);

  population zero;
  zero.members.push_back(make_member({0.0, 0.0, 0.0, 0.0}, 1.0, 1.0));
  CHECK_THROWS_AS(filter_by_roi(zero, space, 1e-6, 0), Error);
}

TEST_CASE("knee_select small inputs and the L-shape knee") {
  CHECK(knee_select({{4.0, 7.0}}) == 0);
  CHECK(knee_select({{5.0, 1.0}, {2.0, 3.0}}) == 1);  // lower f0 regardless of order
  CHECK(knee_select({{0.0, 10.0}, {1.0, 1.0}, {10.0, 0.0}}) == 1);
  CHECK_THROWS_AS(knee_select({}), Error);
}

TEST_CASE("knee_select collinear input returns the lowest-f0 point") {
  const std::vector<std::array<double, 2>> pts = {{3.0, 3.0}, {0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
  CHECK(knee_select(pts) == 1);
  const std::vector<std::array<double, 2>> flat = {{2.0, 5.0}, {0.0, 5.0}, {1.0, 5.0}};
  CHECK(knee_select(flat) == 1);  // zero f1 range is collinear too
}

TEST_CASE("knee_select matches the raw-point oracle on a quarter circle") {
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i <= 20; ++i) {
    const double x = static_cast<double>(i) / 20.0;
    pts.push_back({x, std::sqrt(std::max(0.0, 1.0 - x * x))});
  }
  const int chosen = knee_select(pts);
  const int oracle = brute_knee(pts);
  CHECK(std::abs(chosen - oracle) <= 1);
}

TEST_CASE("knee_select handles a dense cluster plus one distant point") {
  // f0 gaps span three orders of magnitude; normalized chord distances of the
  // raw points are {0, 0.199, 0.273, 0.373, 0}, so the knee is index 3. A
  // y(x) spline through these knots overshoots far below the data on the long
  // final interval and used to drag the selection onto the far endpoint.
  const std::vector<std::array<double, 2>> pts = {
      {0.008849, 8.0}, {0.03763, 6.0}, {0.3299, 5.0}, {0.3354, 4.0}, {7.535, 1.0}};
  CHECK(brute_knee(pts) == 3);
  CHECK(knee_select(pts) == 3);
}

TEST_CASE("knee_select is invariant under positive affine maps of the objectives") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)});
    const int base = knee_select(pts);

    const double a = rng.uniform(0.1, 5.0), b = rng.uniform(-3.0, 3.0);
    const double c = rng.uniform(0.1, 5.0), d = rng.uniform(-3.0, 3.0);
    std::vector<std::array<double, 2>> mapped;
    for (const auto& p : pts) mapped.push_back({a * p[0] + b, c * p[1] + d});
    CHECK(knee_select(mapped) == base);
  }
}

TEST_CASE("decide picks the knee member of the dominant ROI") {
  const source_space space = make_space({0, 0, 1, 1}, 2);
  population front;
  front.members.push_back(make_member({1.0, 0.0, 0.0, 0.0}, 0.0, 10.0));
  front.members.push_back(make_member({0.0, 2.0, 0.0, 0.0}, 1.0, 1.0));  // the knee
  front.members.push_back(make_member({1.0, 1.0, 0.0, 0.0}, 10.0, 0.0));
  front.members.push_back(make_member({0.0, 0.0, 1.0, 0.0}, 0.5, 0.5));  // lone ROI 1 member

  const decision_trace trace = decide(front, space, 1e-6);
  CHECK(trace.roi == 0);
  REQUIRE(trace.counts.size() == 2);
  CHECK(trace.counts[0] == 3);
  CHECK(trace.counts[1] == 1);
  CHECK(trace.knee_f0 == 1.0);
  CHECK(trace.knee_f1 == 1.0);
  CHECK(trace.choice.coeffs[1] == 2.0);
}

TEST_CASE("decide returns a member of the front") {
  const source_space space = make_space({0, 1, 1}, 2);
  population front;
  front.members.push_back(make_member({0.4, 0.0, 0.2}, 2.0, 3.0));
  front.members.push_back(make_member({0.0, 0.8, 0.0}, 3.0, 2.0));

  const decision_trace trace = decide(front, space, 1e-6);
  bool found = false;
  for (const individual& ind : front.members) {
    if ((ind.coeffs - trace.choice.coeffs).norm() == 0.0) found = true;
  }
  CHECK(found);
}

TEST_CASE("decide on a front of one returns that member") {
  const source_space space = make_space({0, 0}, 1);
  population front;
  front.members.push_back(make_member({0.3, 0.0}, 1.5, 0.5));
  const decision_trace trace = decide(front, space, 1e-6);
  CHECK(trace.choice.coeffs[0] == 0.3);
  CHECK(trace.roi == 0);
}

TEST_CASE("decide is deterministic") {
  const source_space space = make_space({0, 0, 1, 1}, 2);
  population front;
  Rng rng(88);
  for (int i = 0; i < 6; ++i) {
    std::vector<double> c(4);
    for (double& v : c) v = rng.normal();
    front.members.push_back(make_member(c, rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0)));
  }
  const decision_trace a = decide(front, space, 1e-6);
  const decision_trace b = decide(front, space, 1e-6);
  CHECK((a.choice.coeffs - b.choice.coeffs).norm() == 0.0);
  CHECK(a.roi == b.roi);
  CHECK(a.knee_f0 == b.knee_f0);
}

TEST_CASE("decide propagates the empty-front error") {
  const source_space space = make_space({0}, 1);
  CHECK_THROWS_AS(decide(population{}, space, 1e-6), Error);
}

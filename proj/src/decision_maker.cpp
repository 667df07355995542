#include "eegsl/decision_maker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "eegsl/errors.hpp"

namespace eegsl {

namespace {

/// Per-ROI flags: does the individual hold an active coefficient there?
std::vector<char> roi_hits(const individual& ind, const source_space& space, double l0_epsilon) {
  require(ind.coeffs.size() == space.size(), errc::shape_mismatch,
          "decision maker: coefficients do not match the source space");
  std::vector<char> hit(space.roi_count, 0);
  const double mx = ind.coeffs.lpNorm<Eigen::Infinity>();
  if (mx == 0.0) return hit;
  const double thr = l0_epsilon * mx;
  for (Eigen::Index i = 0; i < ind.coeffs.size(); ++i) {
    if (std::abs(ind.coeffs[i]) > thr) hit[space.roi_labels[i]] = 1;
  }
  return hit;
}

/// Moments (second derivatives) of the natural interpolating cubic spline.
std::vector<double> natural_spline_moments(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  std::vector<double> h(n - 1);
  for (int i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];

  std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
  diag[0] = 1.0;
  diag[n - 1] = 1.0;
  for (int i = 1; i + 1 < n; ++i) {
    sub[i] = h[i - 1];
    diag[i] = 2.0 * (h[i - 1] + h[i]);
    sup[i] = h[i];
    rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
  }

  for (int i = 1; i < n; ++i) {  // Thomas elimination
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> m(n);
  m[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
  return m;
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& m, double t) {
  const int n = static_cast<int>(x.size());
  int i = static_cast<int>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  const double hi = x[i + 1] - x[i];
  const double a = x[i + 1] - t;
  const double b = t - x[i];
  return m[i] * a * a * a / (6.0 * hi) + m[i + 1] * b * b * b / (6.0 * hi) +
         (y[i] / hi - m[i] * hi / 6.0) * a + (y[i + 1] / hi - m[i + 1] * hi / 6.0) * b;
}

} // namespace

int cant_rep(const population& front, const source_space& space, double l0_epsilon, int roi) {
  require(roi >= 0 && roi < space.roi_count, errc::invalid_argument, "cant_rep: bad ROI index");
  int count = 0;
  for (const individual& ind : front.members) {
    if (roi_hits(ind, space, l0_epsilon)[roi]) ++count;
  }
  return count;
}

std::vector<int> cant_rep_all(const population& front, const source_space& space,
                              double l0_epsilon) {
  std::vector<int> counts(space.roi_count, 0);
  for (const individual& ind : front.members) {
    const std::vector<char> hit = roi_hits(ind, space, l0_epsilon);
    for (int r = 0; r < space.roi_count; ++r) counts[r] += hit[r];
  }
  return counts;
}

int select_roi(const population& front, const source_space& space, double l0_epsilon) {
  require(!front.members.empty(), errc::invalid_argument, "select_roi: empty front");
  const std::vector<int> counts = cant_rep_all(front, space, l0_epsilon);
  int best = 0;
  for (int r = 1; r < space.roi_count; ++r) {
    if (counts[r] > counts[best]) best = r;  // ties keep the lowest index
  }
  require(counts[best] > 0, errc::no_active_solution,
          "select_roi: no front member has active support in any ROI");
  return best;
}

population filter_by_roi(const population& front, const source_space& space, double l0_epsilon,
                         int roi) {
  require(roi >= 0 && roi < space.roi_count, errc::invalid_argument, "filter_by_roi: bad ROI");
  population out;
  out.generation = front.generation;
  for (const individual& ind : front.members) {
    require(ind.evaluated(), errc::state, "filter_by_roi: unevaluated front member");
    if (roi_hits(ind, space, l0_epsilon)[roi]) out.members.push_back(ind);
  }
  require(!out.members.empty(), errc::no_active_solution,
          "filter_by_roi: no member supported in the selected ROI");
  std::stable_sort(out.members.begin(), out.members.end(),
                   [](const individual& a, const individual& b) {
                     return a.objectives[0] < b.objectives[0];
                   });
  return out;
}

int knee_select(const std::vector<std::array<double, 2>>& points) {
  require(!points.empty(), errc::invalid_argument, "knee_select: empty input");
  const int n = static_cast<int>(points.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (points[a][0] != points[b][0]) return points[a][0] < points[b][0];
    if (points[a][1] != points[b][1]) return points[a][1] < points[b][1];
    return a < b;
  });
  if (n <= 2) return order[0];  // single point, or the lower-f0 of two

  double f0_min = points[order[0]][0], f0_max = points[order[n - 1]][0];
  double f1_min = points[0][1], f1_max = points[0][1];
  for (const auto& p : points) {
    f1_min = std::min(f1_min, p[1]);
    f1_max = std::max(f1_max, p[1]);
  }
  const double xr = f0_max - f0_min;
  const double yr = f1_max - f1_min;
  const auto nx = [&](double v) { return xr > 0.0 ? (v - f0_min) / xr : 0.0; };
  const auto ny = [&](double v) { return yr > 0.0 ? (v - f1_min) / yr : 0.0; };

  // One point per abscissa (the lowest-f1 of each f0) so the curve parameter
  // below strictly increases.
  std::vector<int> keep;
  for (int idx : order) {
    if (keep.empty() || points[idx][0] != points[keep.back()][0]) keep.push_back(idx);
  }
  const int m = static_cast<int>(keep.size());
  if (m <= 2) return keep[0];

  std::vector<double> x(m), y(m);
  for (int i = 0; i < m; ++i) {
    x[i] = nx(points[keep[i]][0]);
    y[i] = ny(points[keep[i]][1]);
  }
  // Parametric curve over cumulative chord length: a y(x) spline through f0
  // knots that span orders of magnitude can swing far below the data on a
  // long interval and fake a knee off the front.
  std::vector<double> s(m, 0.0);
  for (int i = 1; i < m; ++i) s[i] = s[i - 1] + std::hypot(x[i] - x[i - 1], y[i] - y[i - 1]);
  const std::vector<double> mx = natural_spline_moments(s, x);
  const std::vector<double> my = natural_spline_moments(s, y);

  const double ax = x[0], ay = y[0], bx = x[m - 1], by = y[m - 1];
  const double chord = std::hypot(bx - ax, by - ay);
  constexpr int kSamples = 200;
  double best_d = -1.0, best_x = ax, best_y = ay;
  for (int k = 0; k < kSamples; ++k) {
    const double t = s[m - 1] * static_cast<double>(k) / (kSamples - 1);
    const double u = spline_eval(s, x, mx, t);
    const double v = spline_eval(s, y, my, t);
    const double d = std::abs((bx - ax) * (ay - v) - (ax - u) * (by - ay)) / chord;
    if (d > best_d) {
      best_d = d;
      best_x = u;
      best_y = v;
    }
  }
  if (best_d < 1e-12) return keep[0];  // collinear trade-off: lowest f0 wins

  int nearest = order[0];
  double nearest_d = std::numeric_limits<double>::infinity();
  for (int idx : order) {  // ascending f0, so strict < breaks ties toward lower f0
    const double d = std::hypot(nx(points[idx][0]) - best_x, ny(points[idx][1]) - best_y);
    if (d < nearest_d) {
      nearest_d = d;
      nearest = idx;
    }
  }
  return nearest;
}

decision_trace decide(const population& front, const source_space& space, double l0_epsilon) {
  require(!front.members.empty(), errc::invalid_argument, "decide: empty front");
  decision_trace trace;
  trace.counts = cant_rep_all(front, space, l0_epsilon);
  trace.roi = select_roi(front, space, l0_epsilon);
  const population filtered = filter_by_roi(front, space, l0_epsilon, trace.roi);

  std::vector<std::array<double, 2>> points;
  points.reserve(filtered.members.size());
  for (const individual& ind : filtered.members) {
    require(ind.objectives.size() >= 2, errc::invalid_argument,
            "decide: knee detection needs at least two objectives");
    points.push_back({ind.objectives[0], ind.objectives[1]});
  }
  const int k = knee_select(points);
  if (std::getenv("EEGSL_TRACE") != nullptr) {
    std::fprintf(stderr, "[decide] counts:");
    for (int c : trace.counts) std::fprintf(stderr, " %d", c);
    std::fprintf(stderr, " roi=%d filtered=%d knee=%d\n[decide] pts:", trace.roi,
                 static_cast<int>(points.size()), k);
    for (const auto& p : points) std::fprintf(stderr, " (%.4g,%.4g)", p[0], p[1]);
    std::fprintf(stderr, "\n");
  }
  trace.choice = filtered.members[k];
  trace.knee_f0 = trace.choice.objectives[0];
  trace.knee_f1 = trace.choice.objectives[1];
  return trace;
}

} // namespace eegsl

#pragma once

#include <array>
#include <vector>

#include "eegsl/headmodel.hpp"
#include "eegsl/moea_core.hpp"

namespace eegsl {

/// Number of front members with at least one active coefficient (relative l0
/// threshold) on a source point of `roi`.
int cant_rep(const population& front, const source_space& space, double l0_epsilon, int roi);

/// All per-ROI counts at once.
std::vector<int> cant_rep_all(const population& front, const source_space& space,
                              double l0_epsilon);

/// ROI with the most supported front members; ties go to the lowest index.
/// All counts zero raises a no-active-solution error.
int select_roi(const population& front, const source_space& space, double l0_epsilon);

/// Front members supported in `roi`, sorted by ascending data-fit objective.
/// Empty result raises a no-active-solution error.
population filter_by_roi(const population& front, const source_space& space, double l0_epsilon,
                         int roi);

/// Elbow of the (f0, f1) trade-off: min-max normalize, sort by f0, pass a
/// clamped interpolating cubic spline through the points, sample 200 curve
/// points and find the one farthest (perpendicular) from the endpoint chord;
/// returns the index (into `points`) of the input point nearest that sample.
/// One point returns it, two return the lower-f0 one, near-collinear input
/// falls back to the lowest-f0 point; ties always break toward lower f0.
int knee_select(const std::vector<std::array<double, 2>>& points);

/// Decision-maker output: the chosen member plus the trace reported alongside.
struct decision_trace {
  individual choice;
  int roi = -1;
  std::vector<int> counts;  // cant_rep per ROI
  double knee_f0 = 0.0;
  double knee_f1 = 0.0;
};

/// Full pipeline: select_roi, filter_by_roi, knee_select on the first two
/// objectives, returning the corresponding front member.
decision_trace decide(const population& front, const source_space& space, double l0_epsilon);

} // namespace eegsl

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eegsl/objectives.hpp"
#include "eegsl/rng.hpp"

namespace eegsl {

/// MOEA solution: dense coefficient vector plus cached evaluation state.
/// `parent` is the back-reference a sub-individual keeps to the full-length
/// member it was projected from (-1 when not a projection).
struct individual {
  Eigen::VectorXd coeffs;
  int roi = -1;
  objective_vector objectives;  // empty until evaluated
  int rank = -1;
  double crowding = 0.0;
  int parent = -1;

  bool evaluated() const { return !objectives.empty(); }
  void invalidate() {
    objectives.clear();
    rank = -1;
    crowding = 0.0;
  }
};

struct population {
  std::vector<individual> members;
  int generation = 0;

  int size() const { return static_cast<int>(members.size()); }
};

/// Pareto dominance: u <= v componentwise with at least one strict inequality.
bool dominates(const objective_vector& u, const objective_vector& v);

/// Fast non-dominated sort. Returns fronts as index lists (front 0 first) and
/// writes each member's rank. Every member must be evaluated.
std::vector<std::vector<int>> non_dominated_sort(population& pop);

/// Crowding distances for one front: per objective, boundary members get
/// +infinity and interior members accumulate the neighbor gap normalized by
/// the objective range (zero range contributes nothing). Returned in front
/// order; also written into the members.
std::vector<double> crowding_distance(const std::vector<int>& front, population& pop);

/// Winner of a two-candidate tournament: lower rank, then larger crowding,
/// then the first candidate. Requires rank/crowding from a prior sort.
int tournament_winner(const population& pop, int a, int b);

/// Draws two members uniformly with replacement and returns the winner index.
int binary_tournament(const population& pop, Rng& rng);

/// Whole-population arithmetic crossover child d = alpha p1 + (1-alpha) p2
/// with alpha ~ N(0,1) (or the injected value when alpha_override is
/// non-null). Coefficients are clamped to |d_i| <= clamp_abs when
/// clamp_abs > 0. The child inherits p1's roi tag and parent back-reference;
/// its objectives are invalidated.
individual arithmetic_crossover(const individual& p1, const individual& p2, Rng& rng,
                                double clamp_abs, const double* alpha_override = nullptr);

/// Adds sigma_t * N(0,1) to every coordinate of the active support (exact
/// nonzeros); other coordinates stay untouched unless all_coordinates is set,
/// in which case every coordinate is perturbed (the full mutation formula —
/// inside a projected ROI group this reactivates dormant sources of that
/// region only). Objectives invalidated.
individual gaussian_step_mutation(const individual& ind, double sigma_t, Rng& rng,
                                  bool all_coordinates = false);

/// NSGA-II environmental selection: fill by ascending front, split the last
/// admitted front by descending crowding (stable, so input order breaks
/// ties). Accepts any input of size >= N (the canonical call has 2N).
population environmental_selection(const population& pop_t, int N);

} // namespace eegsl

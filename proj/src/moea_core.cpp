#include "eegsl/moea_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eegsl {

bool dominates(const objective_vector& u, const objective_vector& v) {
  require(u.size() == v.size(), errc::shape_mismatch,
          "dominates: objective vectors differ in length");
  bool strict = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > v[i]) return false;
    if (u[i] < v[i]) strict = true;
  }
  return strict;
}

std::vector<std::vector<int>> non_dominated_sort(population& pop) {
  const int n = pop.size();
  for (const auto& m : pop.members)
    require(m.evaluated(), errc::state, "non_dominated_sort: unevaluated member");

  std::vector<std::vector<int>> dominated_by(n);  // indices each member dominates
  std::vector<int> dom_count(n, 0);               // how many dominate this member
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      if (dominates(pop.members[p].objectives, pop.members[q].objectives)) {
        dominated_by[p].push_back(q);
        ++dom_count[q];
      } else if (dominates(pop.members[q].objectives, pop.members[p].objectives)) {
        dominated_by[q].push_back(p);
        ++dom_count[p];
      }
    }
  }

  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int p = 0; p < n; ++p)
    if (dom_count[p] == 0) current.push_back(p);
  int assigned = 0;
  while (!current.empty()) {
    const int rank = static_cast<int>(fronts.size());
    std::vector<int> next;
    for (int p : current) {
      pop.members[p].rank = rank;
      ++assigned;
      for (int q : dominated_by[p])
        if (--dom_count[q] == 0) next.push_back(q);
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  require(assigned == n, errc::state, "non_dominated_sort: dominance relation inconsistent");
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<int>& front, population& pop) {
  require(!front.empty(), errc::invalid_argument, "crowding_distance: empty front");
  const std::size_t f = front.size();
  const std::size_t nobj = pop.members[front[0]].objectives.size();
  std::vector<double> dist(f, 0.0);
  if (f <= 2) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
  } else {
    std::vector<std::size_t> order(f);
    for (std::size_t m = 0; m < nobj; ++m) {
      for (std::size_t i = 0; i < f; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pop.members[front[a]].objectives[m] < pop.members[front[b]].objectives[m];
      });
      const double lo = pop.members[front[order.front()]].objectives[m];
      const double hi = pop.members[front[order.back()]].objectives[m];
      dist[order.front()] = std::numeric_limits<double>::infinity();
      dist[order.back()] = std::numeric_limits<double>::infinity();
      const double range = hi - lo;
      if (range <= 0.0) continue;
      for (std::size_t i = 1; i + 1 < f; ++i) {
        const double gap = pop.members[front[order[i + 1]]].objectives[m] -
                           pop.members[front[order[i - 1]]].objectives[m];
        dist[order[i]] += gap / range;
      }
    }
  }
  for (std::size_t i = 0; i < f; ++i) pop.members[front[i]].crowding = dist[i];
  return dist;
}

int tournament_winner(const population& pop, int a, int b) {
  const individual& ia = pop.members[a];
  const individual& ib = pop.members[b];
  if (ia.rank != ib.rank) return ia.rank < ib.rank ? a : b;
  if (ia.crowding != ib.crowding) return ia.crowding > ib.crowding ? a : b;
  return a;  // tie: first drawn
}

int binary_tournament(const population& pop, Rng& rng) {
  require(pop.size() >= 1, errc::invalid_argument, "binary_tournament: empty population");
  const int a = static_cast<int>(rng.uniform_index(pop.size()));
  const int b = static_cast<int>(rng.uniform_index(pop.size()));
  return tournament_winner(pop, a, b);
}

individual arithmetic_crossover(const individual& p1, const individual& p2, Rng& rng,
                                double clamp_abs, const double* alpha_override) {
  require(p1.coeffs.size() == p2.coeffs.size(), errc::shape_mismatch,
          "arithmetic_crossover: parent lengths differ");
  const double alpha = alpha_override ? *alpha_override : rng.normal();
  individual child;
  child.coeffs = alpha * p1.coeffs + (1.0 - alpha) * p2.coeffs;
  if (clamp_abs > 0.0)
    child.coeffs = child.coeffs.cwiseMax(-clamp_abs).cwiseMin(clamp_abs);
  child.roi = p1.roi;
  child.parent = p1.parent;
  return child;
}

individual gaussian_step_mutation(const individual& ind, double sigma_t, Rng& rng,
                                  bool all_coordinates) {
  require(sigma_t >= 0.0, errc::invalid_argument, "gaussian_step_mutation: sigma must be >= 0");
  individual out = ind;
  out.invalidate();
  if (sigma_t == 0.0) return out;
  for (Eigen::Index i = 0; i < out.coeffs.size(); ++i)
    if (all_coordinates || out.coeffs[i] != 0.0) out.coeffs[i] += sigma_t * rng.normal();
  return out;
}

population environmental_selection(const population& pop_t, int N) {
  require(N >= 1, errc::invalid_argument, "environmental_selection: N must be >= 1");
  require(pop_t.size() >= N, errc::shape_mismatch,
          "environmental_selection: input smaller than the target size");
  population work = pop_t;
  const auto fronts = non_dominated_sort(work);
  for (const auto& front : fronts) crowding_distance(front, work);

  population out;
  out.generation = pop_t.generation;
  out.members.reserve(N);
  for (const auto& front : fronts) {
    const int remaining = N - out.size();
    if (remaining <= 0) break;
    if (static_cast<int>(front.size()) <= remaining) {
      for (int idx : front) out.members.push_back(work.members[idx]);
    } else {
      std::vector<int> order = front;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return work.members[a].crowding > work.members[b].crowding;
      });
      for (int t = 0; t < remaining; ++t) out.members.push_back(work.members[order[t]]);
    }
  }
  return out;
}

} // namespace eegsl

#include "eegsl/coevolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "eegsl/errors.hpp"
#include "eegsl/solvers_classic.hpp"

#include <cstdlib>

namespace eegsl {

namespace {

// Temporary diagnostics, enabled by EEGSL_TRACE=1 in the environment.
void trace_pop(const char* tag, int t, const population& pop) {
  if (std::getenv("EEGSL_TRACE") == nullptr || t > 8) return;
  std::fprintf(stderr, "[%s t=%d]", tag, t);
  for (const individual& m : pop.members) {
    const int nnz = static_cast<int>((m.coeffs.array() != 0.0).count());
    std::fprintf(stderr, " (f0=%.4g f1=%.4g nnz=%d roi=%d)", m.objectives[0], m.objectives[1],
                 nnz, m.roi);
  }
  std::fprintf(stderr, "\n");
}

void rank_and_crowd(population& pop) {
  const std::vector<std::vector<int>> fronts = non_dominated_sort(pop);
  for (const std::vector<int>& front : fronts) crowding_distance(front, pop);
}

void validate_config(const moeaar_config& config) {
  require(config.iterations >= 1, errc::invalid_argument, "moeaar: iterations must be >= 1");
  require(config.crossover_fraction >= 0.0 && config.crossover_fraction <= 1.0,
          errc::invalid_argument, "moeaar: crossover_fraction must lie in [0, 1]");
  require(config.mutation_fraction >= 0.0 && config.mutation_fraction <= 1.0,
          errc::invalid_argument, "moeaar: mutation_fraction must lie in [0, 1]");
  require(config.sigma0_factor >= 0.0, errc::invalid_argument,
          "moeaar: sigma0_factor must be non-negative");
  require(config.clamp_factor >= 0.0, errc::invalid_argument,
          "moeaar: clamp_factor must be non-negative");
}

} // namespace

prox_mode ls_mode_for(const penalty_model& model) {
  require(model.terms.size() == 1, errc::invalid_argument,
          "local search requires a single-term penalty model");
  switch (model.terms[0].g) {
    case penalty_transform::abs:
      return prox_mode::l1;
    case penalty_transform::l0_indicator:
      return prox_mode::l0;
    case penalty_transform::square:
      return prox_mode::l2L;
  }
  fail(errc::invalid_argument, "unknown penalty transform");
}

population initial_population(const source_space& space, const Eigen::MatrixXd& K,
                              const Eigen::VectorXd& V, const penalty_model& model) {
  require(K.cols() == space.size(), errc::shape_mismatch,
          "initial_population: lead field columns != source count");
  require(K.rows() == V.size(), errc::shape_mismatch,
          "initial_population: lead field rows != recording size");

  const Eigen::VectorXd jp = pseudoinverse_solution(K, V);
  const std::vector<std::vector<int>> groups = space.roi_members();
  population pop;
  for (int j = 0; j < static_cast<int>(groups.size()); ++j) {
    require(!groups[j].empty(), errc::invalid_argument, "initial_population: empty ROI");
    individual ind;
    ind.coeffs = Eigen::VectorXd::Zero(space.size());
    for (int idx : groups[j]) ind.coeffs[idx] = jp[idx];
    ind.roi = j;
    ind.objectives = evaluate(K, V, ind.coeffs, model);
    pop.members.push_back(std::move(ind));
  }
  return pop;
}

population project_subpopulation(const population& pop, const std::vector<int>& group) {
  require(!group.empty(), errc::invalid_argument, "project_subpopulation: empty group");
  require(!pop.members.empty(), errc::invalid_argument, "project_subpopulation: empty population");
  const Eigen::Index n = pop.members.front().coeffs.size();
  for (int idx : group) {
    require(idx >= 0 && idx < n, errc::invalid_argument,
            "project_subpopulation: group index out of range");
  }
  population sub;
  sub.generation = pop.generation;
  for (int p = 0; p < pop.size(); ++p) {
    individual s;
    s.coeffs.resize(static_cast<Eigen::Index>(group.size()));
    for (std::size_t c = 0; c < group.size(); ++c) s.coeffs[c] = pop.members[p].coeffs[group[c]];
    s.roi = pop.members[p].roi;
    s.parent = p;
    sub.members.push_back(std::move(s));
  }
  return sub;
}

Eigen::VectorXd compose(const context_vector& cv, const individual& sub,
                        const std::vector<int>& group) {
  require(sub.coeffs.size() == static_cast<Eigen::Index>(group.size()), errc::shape_mismatch,
          "compose: sub-individual length != group size");
  Eigen::VectorXd full = cv.values;
  for (std::size_t c = 0; c < group.size(); ++c) {
    require(group[c] >= 0 && group[c] < full.size(), errc::invalid_argument,
            "compose: group index out of range");
    full[group[c]] = sub.coeffs[c];
  }
  return full;
}

population cc_step(const population& pop, const moeaar_config& config, const source_space& space,
                   const Eigen::MatrixXd& K, const Eigen::VectorXd& V, context_vector& cv,
                   double sigma_t, double clamp_abs, Rng& rng) {
  validate_config(config);
  require(!pop.members.empty(), errc::invalid_argument, "cc_step: empty population");
  require(cv.values.size() == K.cols(), errc::shape_mismatch,
          "cc_step: context vector length != source count");
  require(space.size() == K.cols(), errc::shape_mismatch,
          "cc_step: source space does not match the lead field");

  const int N = pop.size();
  for (const individual& m : pop.members) {
    require(m.evaluated(), errc::state, "cc_step: entry population must be evaluated");
  }

  // Candidate pool for the final full-level selection: the incumbents plus every
  // per-group survivor grafted back onto its parent's out-of-group coordinates.
  population candidates;
  candidates.generation = pop.generation;
  candidates.members = pop.members;
  for (individual& m : candidates.members) m.parent = -1;

  const std::vector<std::vector<int>> groups = space.roi_members();
  for (const std::vector<int>& group : groups) {
    require(!group.empty(), errc::invalid_argument, "cc_step: empty ROI group");

    population sub = project_subpopulation(pop, group);
    // With every block at exactly zero, crossover and support-restricted mutation
    // cannot produce a different candidate; the group carries no information this
    // cycle, so its step is skipped.
    bool any_active = false;
    for (const individual& s : sub.members) {
      if (s.coeffs.lpNorm<Eigen::Infinity>() != 0.0) {
        any_active = true;
        break;
      }
    }
    if (!any_active) continue;

    for (individual& s : sub.members) {
      s.objectives = evaluate(K, V, compose(cv, s, group), config.penalty);
    }
    rank_and_crowd(sub);

    const int n_children = static_cast<int>(std::ceil(config.crossover_fraction * N));
    std::vector<individual> children;
    children.reserve(n_children);
    for (int c = 0; c < n_children; ++c) {
      const int a = binary_tournament(sub, rng);
      const int b = binary_tournament(sub, rng);
      children.push_back(arithmetic_crossover(sub.members[a], sub.members[b], rng, clamp_abs));
    }
    const int n_mut = static_cast<int>(std::ceil(config.mutation_fraction * n_children));
    std::vector<int> picks(n_children);
    std::iota(picks.begin(), picks.end(), 0);
    for (int i = 0; i < n_mut; ++i) {  // partial Fisher-Yates: a distinct random subset
      const int j = i + static_cast<int>(rng.uniform_index(n_children - i));
      std::swap(picks[i], picks[j]);
    }
    std::vector<individual> offspring = children;
    for (int i = 0; i < n_mut; ++i) {
      // Full-formula mutation: inside this group every coordinate belongs to
      // the same region, so perturbing zeros reactivates dormant sources of
      // that region without bleeding activity across regions.
      offspring.push_back(gaussian_step_mutation(children[picks[i]], sigma_t, rng, true));
    }

    population pool;
    pool.members = sub.members;  // parents first: stable selection favors them on ties
    for (individual& o : offspring) {
      o.objectives = evaluate(K, V, compose(cv, o, group), config.penalty);
      pool.members.push_back(std::move(o));
    }
    const population survivors = environmental_selection(pool, N);

    int best = 0;  // lowest rank, then highest crowding, then lowest data fit
    for (int i = 1; i < survivors.size(); ++i) {
      const individual& a = survivors.members[i];
      const individual& b = survivors.members[best];
      if (a.rank != b.rank) {
        if (a.rank < b.rank) best = i;
      } else if (a.crowding != b.crowding) {
        if (a.crowding > b.crowding) best = i;
      } else if (a.objectives[0] < b.objectives[0]) {
        best = i;
      }
    }
    Eigen::VectorXd composed = compose(cv, survivors.members[best], group);
    if (residual_ss(K, V, composed) <= residual_ss(K, V, cv.values)) {
      cv.values = std::move(composed);  // guard: never worsen the context fit
    }

    for (const individual& s : survivors.members) {
      individual full = pop.members[s.parent];  // out-of-group coords from the parent
      bool changed = false;
      for (std::size_t c = 0; c < group.size(); ++c) {
        if (full.coeffs[group[c]] != s.coeffs[c]) changed = true;
        full.coeffs[group[c]] = s.coeffs[c];
      }
      if (!changed) continue;  // identical to the incumbent already in the pool
      full.roi = s.roi;
      full.parent = -1;
      full.objectives = evaluate(K, V, full.coeffs, config.penalty);
      full.rank = -1;
      full.crowding = 0.0;
      candidates.members.push_back(std::move(full));
    }
  }

  if (candidates.size() == N) return candidates;  // no group produced a new candidate
  return environmental_selection(candidates, N);
}

moeaar_result run_moeaar(const Eigen::MatrixXd& K, const Eigen::VectorXd& V,
                         const source_space& space, const moeaar_config& config) {
  validate_config(config);
  const prox_mode mode = ls_mode_for(config.penalty);

  Eigen::SparseMatrix<double> identity_l;
  const Eigen::SparseMatrix<double>* lptr = nullptr;
  if (mode == prox_mode::l2L) {
    if (config.penalty.terms[0].L) {
      lptr = config.penalty.terms[0].L.get();
    } else {
      identity_l.resize(K.cols(), K.cols());
      identity_l.setIdentity();
      lptr = &identity_l;
    }
  }

  population pop = initial_population(space, K, V, config.penalty);
  const int N = pop.size();

  int best0 = 0;
  double jmax = 0.0;
  for (int i = 0; i < N; ++i) {
    if (pop.members[i].objectives[0] < pop.members[best0].objectives[0]) best0 = i;
    jmax = std::max(jmax, pop.members[i].coeffs.lpNorm<Eigen::Infinity>());
  }
  context_vector cv{pop.members[best0].coeffs};
  const double sigma0 = config.sigma0_factor * jmax;
  const double clamp_abs = config.clamp_factor > 0.0 ? config.clamp_factor * jmax : 0.0;

  std::ofstream telemetry;
  if (!config.telemetry_path.empty()) {
    telemetry.open(config.telemetry_path, std::ios::app);
    require(telemetry.good(), errc::io, "moeaar: cannot open telemetry log");
    if (telemetry.tellp() == 0) telemetry << "cycle,best_f0,front_size,cv_f0\n";
  }

  Rng rng(config.seed);
  moeaar_result result;
  population front;
  for (int t = 0; t < config.iterations; ++t) {
    const double sigma_t = sigma0 * (1.0 - static_cast<double>(t) / config.iterations);
    const population pop_cc = cc_step(pop, config, space, K, V, cv, sigma_t, clamp_abs, rng);
    trace_pop("cc", t, pop_cc);
    const population pop_ls =
        local_search_population(pop_cc, K, V, mode, config.penalty, config.local_search, lptr);
    trace_pop("ls", t, pop_ls);
    population pool;
    pool.members = pop_cc.members;
    pool.members.insert(pool.members.end(), pop_ls.members.begin(), pop_ls.members.end());
    pop = environmental_selection(pool, N);
    pop.generation = t + 1;
    trace_pop("sel", t, pop);

    double best_f0 = std::numeric_limits<double>::infinity();
    front.members.clear();
    front.generation = pop.generation;
    for (const individual& m : pop.members) {
      for (double o : m.objectives) {
        require(std::isfinite(o), errc::numeric,
                "moeaar: non-finite objective at cycle " + std::to_string(t));
      }
      best_f0 = std::min(best_f0, m.objectives[0]);
      if (m.rank != 0) continue;
      bool duplicate = false;  // the front is a set: drop elitist copies
      for (const individual& f : front.members) {
        if ((f.coeffs.array() == m.coeffs.array()).all()) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) front.members.push_back(m);
    }
    if (telemetry.is_open()) {
      char line[160];
      std::snprintf(line, sizeof line, "%d,%.17g,%d,%.17g\n", t, best_f0, front.size(),
                    residual_ss(K, V, cv.values));
      telemetry << line;
    }
    ++result.cycles_run;
  }

  result.front = front;
  for (const individual& m : front.members) result.archive.push_back(m.objectives);
  result.cv = cv;
  result.decision = decide(front, space, config.penalty.l0_epsilon);
  return result;
}

} // namespace eegsl

#pragma once

// Population bookkeeping shared by both LAB variants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "labopt/error.hpp"
#include "labopt/problem.hpp"
#include "labopt/rng.hpp"

namespace labopt {

enum class Role { Leader, Advocate, Believer };

struct Individual {
  Point position;
  double value = std::numeric_limits<double>::infinity();
  bool feasible = true;
  Role role = Role::Believer;
  /// Local sampling half-widths (leaders and advocates of the unconstrained variant).
  std::vector<double> interval;
};

/// members[0] is the leader, members[1] the advocate, the rest believers.
struct GroupState {
  std::vector<Individual> members;

  Individual& leader() { return members[0]; }
  const Individual& leader() const { return members[0]; }
  Individual& advocate() { return members[1]; }
  const Individual& advocate() const { return members[1]; }
};

struct Population {
  std::vector<GroupState> groups;
  std::size_t global_leader = 0;  // group index of L*

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.members.size();
    return n;
  }

  const Individual& leader_of_all() const { return groups[global_leader].leader(); }

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& g : groups)
      for (const auto& m : g.members) f(m);
  }
};

/// How leader/advocate sampling intervals evolve (see README, "Sampling intervals").
enum class IntervalRule {
  SuccessAdaptive,  // shrink by (1 - theta) on a failed sample, widen on success
  Geometric,        // shrink by (1 - theta) every iteration regardless of outcome
};

/// Which coordinates a local sample redraws.
enum class LocalMove {
  SingleCoordinate,  // one uniformly chosen coordinate
  FullBox,           // every coordinate
};

/// Roulette weighting of reciprocal objective values.
enum class ProbabilityMode {
  Auto,     // raw reciprocals when every value is > 0, shifted otherwise
  Raw,      // 1/f exactly; requires f > 0
  Shifted,  // 1/(f - min f + eps*range)
};

struct LabConfig {
  std::size_t n = 5;          // individuals per group
  std::size_t groups = 4;     // G
  double theta = 0.15;        // sampling space reduction factor
  std::size_t max_iter = 2000;
  std::size_t stall_window = 0;  // 0 disables the stall test
  double stall_tol = 1e-12;
  std::uint64_t seed = 0;

  IntervalRule interval_rule = IntervalRule::SuccessAdaptive;
  LocalMove local_move = LocalMove::SingleCoordinate;
  ProbabilityMode probability_mode = ProbabilityMode::Auto;
  double target_success = 0.2;  // success rate the adaptive rule settles at
  bool local_sampling = true;   // off only in degenerate regression tests

  std::size_t population() const noexcept { return n * groups; }

  void validate() const {
    if (n < 3) throw ConfigError("n must be >= 3 (leader, advocate and at least one believer)");
    if (groups < 1) throw ConfigError("group count must be >= 1");
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0, 1)");
    if (!(target_success > 0.0 && target_success < 1.0))
      throw ConfigError("target success rate must lie in (0, 1)");
    if (!(stall_tol >= 0.0)) throw ConfigError("stall tolerance must be >= 0");
  }
};

struct RunRecord {
  double best_value = std::numeric_limits<double>::infinity();
  Point best_position;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  double wall_ms = 0.0;
  std::vector<double> trace;  // best-so-far after each iteration (index 0 = initial population)
  std::uint64_t seed = 0;
  bool feasible = true;
};

/// Counts every objective evaluation made through it.
class CountingEvaluator {
 public:
  explicit CountingEvaluator(const ProblemSpec& p) : problem_(&p) {}

  Evaluation operator()(std::span<const double> x) {
    ++count_;
    return evaluate(*problem_, x);
  }

  const ProblemSpec& problem() const { return *problem_; }
  std::size_t count() const noexcept { return count_; }

 private:
  const ProblemSpec* problem_;
  std::size_t count_ = 0;
};

/// Sorts members ascending by value (stable) and assigns roles by rank.
inline void assign_roles(GroupState& g) {
  std::stable_sort(g.members.begin(), g.members.end(),
                   [](const Individual& a, const Individual& b) { return a.value < b.value; });
  for (std::size_t i = 0; i < g.members.size(); ++i)
    g.members[i].role = i == 0 ? Role::Leader : i == 1 ? Role::Advocate : Role::Believer;
}

/// Group index of the best local leader; ties go to the lowest index.
inline std::size_t select_global_leader(const Population& pop) {
  std::size_t best = 0;
  for (std::size_t g = 1; g < pop.groups.size(); ++g)
    if (pop.groups[g].leader().value < pop.groups[best].leader().value) best = g;
  return best;
}

enum class RegroupMode {
  WithinGroups,  // re-rank inside each group, membership unchanged
  Global,        // sort everyone, then fill groups with consecutive ranks
};

inline void regroup(Population& pop, RegroupMode mode) {
  if (mode == RegroupMode::Global && !pop.groups.empty()) {
    std::vector<Individual> all;
    all.reserve(pop.size());
    for (auto& g : pop.groups)
      for (auto& m : g.members) all.push_back(std::move(m));
    std::stable_sort(all.begin(), all.end(),
                     [](const Individual& a, const Individual& b) { return a.value < b.value; });
    std::size_t k = 0;
    for (auto& g : pop.groups)
      for (auto& m : g.members) m = std::move(all[k++]);
  }
  for (auto& g : pop.groups) assign_roles(g);
  pop.global_leader = select_global_leader(pop);
}

/// Samples n*G individuals uniformly in the bounds, shuffles them into G
/// groups and assigns roles.
inline Population init_population(const LabConfig& c, CountingEvaluator& eval, Rng& rng) {
  c.validate();
  const ProblemSpec& p = eval.problem();
  const std::size_t total = c.population();
  std::vector<Individual> all(total);
  for (auto& ind : all) {
    Point x(p.dim());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(p.bounds.lower[i], p.bounds.upper[i]);
    Evaluation ev = eval(x);
    ind.position = std::move(ev.point);
    ind.value = ev.objective;
    ind.feasible = ev.feasible;
    ind.interval.resize(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) ind.interval[i] = p.bounds.width(i) / 2.0;
  }
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  rng.shuffle(order);

  Population pop;
  pop.groups.resize(c.groups);
  for (std::size_t g = 0; g < c.groups; ++g) {
    auto& members = pop.groups[g].members;
    members.reserve(c.n);
    for (std::size_t j = 0; j < c.n; ++j) members.push_back(std::move(all[order[g * c.n + j]]));
  }
  regroup(pop, RegroupMode::WithinGroups);
  return pop;
}

/// True once the budget is spent or the best value stopped improving over
/// the last `stall_window` iterations. `trace[k]` is best-so-far after iteration k.
inline bool converged(std::span<const double> trace, const LabConfig& c, std::size_t iter) {
  if (iter >= c.max_iter) return true;
  const std::size_t w = c.stall_window;
  if (w == 0 || iter < w || trace.size() <= iter) return false;
  double then = trace[iter - w];
  double now = trace[iter];
  double rel = (then - now) / std::max(std::fabs(then), 1e-12);
  return rel < c.stall_tol;
}

}  // namespace labopt

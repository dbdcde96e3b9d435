#pragma once

// Constrained Modified LAB. Runs inside reduced search regions and keeps every
// individual feasible: a move is applied only when its target is feasible.

#include <chrono>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "labopt/cluster_box.hpp"
#include "labopt/error.hpp"
#include "labopt/lab.hpp"
#include "labopt/parallel.hpp"
#include "labopt/population.hpp"
#include "labopt/problem.hpp"
#include "labopt/rng.hpp"

namespace labopt {

struct ConstrainedConfig {
  LabConfig base = [] {
    LabConfig c;
    c.n = 3;
    c.groups = 71;
    c.max_iter = 1000;
    return c;
  }();
  double omega = 0.8;
  double beta = 100.0;
  std::size_t init_rejection_cap = 10000;

  void validate() const {
    base.validate();
    if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("omega must lie in (0, 1]");
    if (!(beta >= 1.0)) throw ConfigError("beta must be >= 1");
    if (init_rejection_cap < 1) throw ConfigError("init rejection cap must be >= 1");
  }
};

/// r^{Lg}: same weighting as the advocate probabilities.
inline std::vector<double> leader_probabilities(std::span<const double> leader_values,
                                                ProbabilityMode mode = ProbabilityMode::Auto) {
  return reciprocal_probabilities(leader_values, mode);
}

/// Moves `from` a fraction omega of the way to `to`.
inline Point step_toward(std::span<const double> from, std::span<const double> to, double omega) {
  if (from.size() != to.size()) throw DimensionError("step_toward: length mismatch");
  Point x(from.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = from[i] + omega * (to[i] - from[i]);
  return x;
}

inline Point update_advocate(const Individual& advocate, const Individual& selected_leader, double omega,
                             const ClusterBox& box) {
  Point x = step_toward(advocate.position, selected_leader.position, omega);
  box.clip(x);
  return x;
}

/// Local leader step toward L*. Passing L* itself as the mover is a caller bug.
inline Point update_local_leader(const Individual& leader, const Individual& global_leader, double omega,
                                 const ClusterBox& box) {
  if (&leader == &global_leader)
    throw std::logic_error("update_local_leader called on the global leader");
  Point x = step_toward(leader.position, global_leader.position, omega);
  box.clip(x);
  return x;
}

/// sigma = omega * beta / (iter + beta): omega at iter 0, half of it at iter = beta.
inline double step_size_sigma(double omega, std::size_t iter, double beta) {
  if (!(beta >= 1.0)) throw ConfigError("beta must be >= 1");
  return omega * beta / (static_cast<double>(iter) + beta);
}

/// gl_i + |width_i| * u_i * sigma with u_i ~ U[-1, 1], clipped to the box.
inline Point update_global_leader(const Individual& global_leader, const ClusterBox& box, double sigma,
                                  Rng& rng) {
  Point x = global_leader.position;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double u = rng.uniform(-1.0, 1.0);
    x[i] += std::fabs(box.max[i] - box.min[i]) * u * sigma;
  }
  box.clip(x);
  return x;
}

using AcceptObserver = std::function<void(const Individual&)>;

/// Evaluates `candidate` and replaces `current` with it when feasible,
/// whether or not the objective improved. Returns whether it was accepted.
inline bool feasibility_gate(CountingEvaluator& eval, Individual& current, std::span<const double> candidate,
                             const AcceptObserver& observer = {}) {
  Evaluation ev = eval(candidate);
  if (!ev.feasible) return false;
  current.position = std::move(ev.point);
  current.value = ev.objective;
  current.feasible = true;
  if (observer) observer(current);
  return true;
}

/// Rejection-samples `count` feasible individuals uniformly inside `box`.
inline std::vector<Individual> feasible_init(CountingEvaluator& eval, const ClusterBox& box, std::size_t count,
                                             std::size_t cap, Rng& rng) {
  if (cap < 1) throw ConfigError("rejection cap must be >= 1");
  std::vector<Individual> out;
  out.reserve(count);
  Point x(box.dim());
  for (std::size_t k = 0; k < count; ++k) {
    bool found = false;
    for (std::size_t draw = 0; draw < cap && !found; ++draw) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.min[i], box.max[i]);
      Evaluation ev = eval(x);
      if (ev.feasible) {
        Individual ind;
        ind.position = std::move(ev.point);
        ind.value = ev.objective;
        out.push_back(std::move(ind));
        found = true;
      }
    }
    if (!found)
      throw InfeasibleRegion("no feasible point in box " + std::to_string(box.id) + " after " +
                             std::to_string(cap) + " draws (individual " + std::to_string(k + 1) +
                             "); check the box or the feasibility tolerance");
  }
  return out;
}

/// Intersects a box with the problem bounds so that every clipped candidate is evaluable.
inline ClusterBox fit_box(const ClusterBox& box, const Bounds& bounds) {
  if (box.min.size() != bounds.dim() || box.max.size() != bounds.dim())
    throw DimensionError("cluster box " + std::to_string(box.id) + " has the wrong dimension");
  ClusterBox out = box;
  for (std::size_t i = 0; i < bounds.dim(); ++i) {
    out.min[i] = std::max(box.min[i], bounds.lower[i]);
    out.max[i] = std::min(box.max[i], bounds.upper[i]);
    if (!(out.min[i] <= out.max[i]))
      throw DimensionError("cluster box " + std::to_string(box.id) + " lies outside the bounds");
  }
  return out;
}

/// One constrained run confined to a single box.
class ConstrainedLab {
 public:
  ConstrainedLab(ProblemSpec problem, const ClusterBox& box, ConstrainedConfig config,
                 AcceptObserver observer = {})
      : problem_(std::move(problem)),
        eval_(problem_),
        box_(fit_box(box, problem_.bounds)),
        config_(std::move(config)),
        rng_(config_.base.seed),
        observer_(std::move(observer)) {
    config_.validate();
    const LabConfig& c = config_.base;
    std::vector<Individual> all = feasible_init(eval_, box_, c.population(), config_.init_rejection_cap, rng_);
    if (observer_)
      for (const auto& ind : all) observer_(ind);
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng_.shuffle(order);
    pop_.groups.resize(c.groups);
    for (std::size_t g = 0; g < c.groups; ++g)
      for (std::size_t j = 0; j < c.n; ++j) pop_.groups[g].members.push_back(all[order[g * c.n + j]]);
    regroup(pop_, RegroupMode::WithinGroups);
    record_.seed = c.seed;
    refresh_best();
    record_.trace.push_back(record_.best_value);
  }

  ConstrainedLab(const ConstrainedLab&) = delete;
  ConstrainedLab& operator=(const ConstrainedLab&) = delete;

  const Population& population() const { return pop_; }
  const RunRecord& record() const { return record_; }
  const ClusterBox& box() const { return box_; }
  std::size_t iteration() const noexcept { return iter_; }

  void step() {
    const std::size_t G = pop_.groups.size();
    const ProbabilityMode mode = config_.base.probability_mode;

    std::vector<double> adv_values(G), leader_values(G);
    for (std::size_t g = 0; g < G; ++g) {
      adv_values[g] = pop_.groups[g].advocate().value;
      leader_values[g] = pop_.groups[g].leader().value;
    }
    const auto adv_probs = advocate_probabilities(adv_values, mode);
    const auto leader_probs = leader_probabilities(leader_values, mode);

    for (std::size_t g = 0; g < G; ++g) {
      auto& group = pop_.groups[g];
      for (std::size_t j = 2; j < group.members.size(); ++j) {
        std::size_t k = roulette_select(adv_probs, rng_);
        LearningWeights w = sample_weights(rng_);
        Point x = convex_combination(group.leader().position, pop_.groups[k].advocate().position, w);
        box_.clip(x);
        feasibility_gate(eval_, group.members[j], x, observer_);
      }
    }

    for (std::size_t g = 0; g < G; ++g) {
      std::size_t k = roulette_select(leader_probs, rng_);
      Point x = update_advocate(pop_.groups[g].advocate(), pop_.groups[k].leader(), config_.omega, box_);
      feasibility_gate(eval_, pop_.groups[g].advocate(), x, observer_);
    }

    const std::size_t star = pop_.global_leader;
    for (std::size_t g = 0; g < G; ++g) {
      if (g == star) continue;
      Point x = update_local_leader(pop_.groups[g].leader(), pop_.groups[star].leader(), config_.omega, box_);
      feasibility_gate(eval_, pop_.groups[g].leader(), x, observer_);
    }

    double sigma = step_size_sigma(config_.omega, iter_, config_.beta);
    Point x = update_global_leader(pop_.groups[star].leader(), box_, sigma, rng_);
    feasibility_gate(eval_, pop_.groups[star].leader(), x, observer_);

    regroup(pop_, RegroupMode::Global);
    ++iter_;
    refresh_best();
    record_.trace.push_back(record_.best_value);
  }

  bool done() const { return converged(record_.trace, config_.base, iter_); }

  RunRecord run() {
    auto t0 = std::chrono::steady_clock::now();
    while (!done()) step();
    record_.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    record_.iterations = iter_;
    record_.evaluations = eval_.count();
    return record_;
  }

 private:
  void refresh_best() {
    pop_.for_each([&](const Individual& m) {
      if (m.value < record_.best_value) {
        record_.best_value = m.value;
        record_.best_position = m.position;
      }
    });
  }

  ProblemSpec problem_;
  CountingEvaluator eval_;
  ClusterBox box_;
  ConstrainedConfig config_;
  Rng rng_;
  AcceptObserver observer_;
  Population pop_;
  RunRecord record_;
  std::size_t iter_ = 0;
};

struct ConstrainedResult {
  RunRecord overall;
  std::vector<RunRecord> per_box;  // entries for skipped boxes have an empty trace
  std::vector<std::string> warnings;
};

/// Runs every box independently (in parallel when jobs > 1) and keeps the best.
/// Box b uses seed derive_seed(config.base.seed, b). Boxes without a feasible
/// start are skipped with a warning unless every box fails.
inline ConstrainedResult optimize_constrained(const ProblemSpec& problem, const std::vector<ClusterBox>& boxes,
                                              const ConstrainedConfig& config, std::size_t jobs = 1,
                                              const AcceptObserver& observer = {}) {
  if (boxes.empty()) throw ConfigError("no search regions given");
  config.validate();
  auto t0 = std::chrono::steady_clock::now();

  ConstrainedResult result;
  result.per_box.resize(boxes.size());
  std::vector<std::string> failures(boxes.size());
  parallel_for(boxes.size(), jobs, [&](std::size_t b) {
    ConstrainedConfig c = config;
    c.base.seed = derive_seed(config.base.seed, b);
    try {
      result.per_box[b] = ConstrainedLab(problem, boxes[b], c, observer).run();
    } catch (const InfeasibleRegion& e) {
      failures[b] = e.what();
    }
  });

  std::string all_failures;
  RunRecord& best = result.overall;
  best.seed = config.base.seed;
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    if (!failures[b].empty()) {
      result.warnings.push_back("skipping box " + std::to_string(boxes[b].id) + ": " + failures[b]);
      all_failures += (all_failures.empty() ? "" : "; ") + failures[b];
      continue;
    }
    const RunRecord& r = result.per_box[b];
    best.evaluations += r.evaluations;
    best.iterations = std::max(best.iterations, r.iterations);
    if (r.best_value < best.best_value) {
      best.best_value = r.best_value;
      best.best_position = r.best_position;
    }
    if (best.trace.size() < r.trace.size())
      best.trace.resize(r.trace.size(), best.trace.empty() ? r.trace.back() : best.trace.back());
    for (std::size_t i = 0; i < best.trace.size(); ++i) {
      double v = i < r.trace.size() ? r.trace[i] : r.trace.back();
      best.trace[i] = std::min(best.trace[i], v);
    }
  }
  if (result.warnings.size() == boxes.size()) throw InfeasibleRegion(all_failures);
  best.feasible = true;
  best.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace labopt

#pragma once

// Modified LAB for bound-constrained problems.

#include <chrono>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "labopt/error.hpp"
#include "labopt/population.hpp"
#include "labopt/problem.hpp"
#include "labopt/rng.hpp"

namespace labopt {

inline constexpr double kShiftEpsilon = 1e-6;

/// Roulette weights proportional to reciprocal objective values.
///
/// Raw mode is the plain 1/f normalisation and needs every f > 0. Shifted
/// mode uses f' = f - min(f) + 1e-6 * range so that non-positive values keep
/// their ordering; all-equal values give a uniform vector.
inline std::vector<double> reciprocal_probabilities(std::span<const double> values,
                                                    ProbabilityMode mode = ProbabilityMode::Auto) {
  if (values.empty()) throw ConfigError("probabilities of an empty set");
  bool all_positive = true;
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) throw EvalError("non-finite objective value in roulette weights");
    all_positive = all_positive && v > 0.0;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (mode == ProbabilityMode::Raw && !all_positive)
    throw EvalError("raw reciprocal weights need strictly positive values");
  bool raw = mode == ProbabilityMode::Raw || (mode == ProbabilityMode::Auto && all_positive);

  std::vector<double> p(values.size());
  const double range = hi - lo;
  if (!raw && range == 0.0) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  double total = 0.0;
  for (std::size_t g = 0; g < values.size(); ++g) {
    double f = raw ? values[g] : values[g] - lo + kShiftEpsilon * range;
    p[g] = 1.0 / f;
    total += p[g];
  }
  if (!std::isfinite(total)) {
    // Reciprocals overflowed (values near the smallest subnormals); fall back to the shift rule.
    if (raw && mode == ProbabilityMode::Auto) return reciprocal_probabilities(values, ProbabilityMode::Shifted);
    throw EvalError("roulette weights overflowed");
  }
  for (double& v : p) v /= total;
  return p;
}

/// r^{Ag}: selection probabilities of the G advocates.
inline std::vector<double> advocate_probabilities(std::span<const double> advocate_values,
                                                  ProbabilityMode mode = ProbabilityMode::Auto) {
  return reciprocal_probabilities(advocate_values, mode);
}

/// Cumulative-sum inversion of a single uniform draw. Zero-mass entries are never returned.
inline std::size_t roulette_select(std::span<const double> probs, Rng& rng) {
  double total = 0.0;
  for (double p : probs) total += p;
  double u = rng.uniform01() * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last_positive = i;
    if (u < cum) return i;
  }
  return last_positive;
}

struct LearningWeights {
  double w1;  // leader share
  double w2;  // advocate share
};

/// w1 ~ U[0.5, 1], w2 = 1 - w1, so w1 + w2 = 1 and w1 >= w2.
inline LearningWeights sample_weights(Rng& rng) {
  double w1 = rng.uniform(0.5, 1.0);
  return {w1, 1.0 - w1};
}

/// w1 * leader + w2 * advocate, unclipped.
inline Point convex_combination(std::span<const double> leader, std::span<const double> advocate,
                                LearningWeights w) {
  if (leader.size() != advocate.size()) throw DimensionError("believer update: length mismatch");
  Point x(leader.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = w.w1 * leader[i] + w.w2 * advocate[i];
  return x;
}

/// Believer position: w1 * leader + w2 * advocate, clipped to bounds.
inline Point update_believer(std::span<const double> leader, std::span<const double> advocate,
                             LearningWeights w, const Bounds& bounds) {
  Point x = convex_combination(leader, advocate, w);
  bounds.clip(x);
  return x;
}

inline double interval_floor(const Bounds& b, std::size_t i) { return 1e-12 * b.width(i); }

/// half_width <- max(half_width * (1 - theta), floor).
inline void shrink_interval(std::span<double> half_width, double theta, const Bounds& bounds) {
  for (std::size_t i = 0; i < half_width.size(); ++i)
    half_width[i] = std::max(half_width[i] * (1.0 - theta), interval_floor(bounds, i));
}

/// Inverse step of the adaptive rule; capped at half the bound width.
inline void widen_interval(std::span<double> half_width, double factor, const Bounds& bounds) {
  for (std::size_t i = 0; i < half_width.size(); ++i)
    half_width[i] = std::min(half_width[i] * factor, bounds.width(i) / 2.0);
}

/// Growth factor on success that balances (1 - theta) shrinks at the target success rate.
inline double widen_factor(double theta, double target_success) {
  return std::pow(1.0 - theta, -(1.0 - target_success) / target_success);
}

/// Draws one candidate around `ind` inside its sampling interval and keeps it
/// only if strictly better. Returns whether the candidate was accepted.
inline bool local_sample(Individual& ind, LocalMove move, Rng& rng, CountingEvaluator& eval) {
  const Bounds& b = eval.problem().bounds;
  Point y = ind.position;
  auto redraw = [&](std::size_t i) {
    double lo = std::max(ind.position[i] - ind.interval[i], b.lower[i]);
    double hi = std::min(ind.position[i] + ind.interval[i], b.upper[i]);
    y[i] = rng.uniform(lo, hi);
  };
  if (move == LocalMove::SingleCoordinate) {
    redraw(rng.index(y.size()));
  } else {
    for (std::size_t i = 0; i < y.size(); ++i) redraw(i);
  }
  Evaluation ev = eval(y);
  if (ev.objective < ind.value) {
    ind.position = std::move(ev.point);
    ind.value = ev.objective;
    return true;
  }
  return false;
}

/// One Modified LAB run. Construct, optionally replace the population, then
/// call run() (or step() repeatedly).
class UnconstrainedLab {
 public:
  UnconstrainedLab(ProblemSpec problem, LabConfig config)
      : problem_(std::move(problem)), eval_(problem_), config_(std::move(config)), rng_(config_.seed) {
    config_.validate();
    if (problem_.constrained())
      throw ConfigError("problem '" + problem_.name +
                        "' has constraints; use the constrained variant");
    pop_ = init_population(config_, eval_, rng_);
    record_.seed = config_.seed;
    refresh_best();
    record_.trace.push_back(record_.best_value);
  }

  /// Replaces the population (values must be cached). Resets the trace.
  void set_population(Population pop) {
    pop_ = std::move(pop);
    regroup(pop_, RegroupMode::WithinGroups);
    record_.best_value = std::numeric_limits<double>::infinity();
    refresh_best();
    record_.trace.assign(1, record_.best_value);
    iter_ = 0;
  }

  UnconstrainedLab(const UnconstrainedLab&) = delete;
  UnconstrainedLab& operator=(const UnconstrainedLab&) = delete;

  const Population& population() const { return pop_; }
  Population& population() { return pop_; }
  const RunRecord& record() const { return record_; }
  std::size_t iteration() const noexcept { return iter_; }
  std::size_t evaluations() const noexcept { return eval_.count(); }

  /// Forces every believer update to use this leader weight (testing aid).
  void fix_leader_weight(std::optional<double> w1) { fixed_w1_ = w1; }

  void step() {
    const Bounds& bounds = eval_.problem().bounds;
    const std::size_t G = pop_.groups.size();

    std::vector<double> adv_values(G);
    for (std::size_t g = 0; g < G; ++g) adv_values[g] = pop_.groups[g].advocate().value;
    const std::vector<double> probs = advocate_probabilities(adv_values, config_.probability_mode);

    for (std::size_t g = 0; g < G; ++g) {
      auto& group = pop_.groups[g];
      for (std::size_t j = 2; j < group.members.size(); ++j) {
        std::size_t k = roulette_select(probs, rng_);
        LearningWeights w = sample_weights(rng_);
        if (fixed_w1_) w = {*fixed_w1_, 1.0 - *fixed_w1_};
        Point x = update_believer(group.leader().position, pop_.groups[k].advocate().position, w, bounds);
        Evaluation ev = eval_(x);
        group.members[j].position = std::move(ev.point);
        group.members[j].value = ev.objective;
      }
    }

    if (config_.local_sampling) {
      const double grow = widen_factor(config_.theta, config_.target_success);
      for (auto& group : pop_.groups) {
        for (std::size_t j = 0; j < 2; ++j) {
          Individual& ind = group.members[j];
          bool improved = local_sample(ind, config_.local_move, rng_, eval_);
          if (config_.interval_rule == IntervalRule::Geometric || !improved)
            shrink_interval(ind.interval, config_.theta, bounds);
          else
            widen_interval(ind.interval, grow, bounds);
        }
      }
    }

    regroup(pop_, RegroupMode::WithinGroups);
    ++iter_;
    refresh_best();
    record_.trace.push_back(record_.best_value);
  }

  bool done() const { return converged(record_.trace, config_, iter_); }

  RunRecord run() {
    auto t0 = std::chrono::steady_clock::now();
    while (!done()) step();
    auto t1 = std::chrono::steady_clock::now();
    record_.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
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

  ProblemSpec problem_;  // owned so that eval_ never dangles
  CountingEvaluator eval_;
  LabConfig config_;
  Rng rng_;
  Population pop_;
  RunRecord record_;
  std::size_t iter_ = 0;
  std::optional<double> fixed_w1_;
};

inline RunRecord optimize(const ProblemSpec& problem, const LabConfig& config) {
  return UnconstrainedLab(problem, config).run();
}

}  // namespace labopt

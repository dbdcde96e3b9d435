#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "labopt/error.hpp"
#include "labopt/expr.hpp"

namespace labopt {

using Point = std::vector<double>;
using Objective = std::function<double(std::span<const double>)>;

inline constexpr double kDefaultFeasibilityTol = 1e-9;

/// Axis-aligned box [lower, upper].
struct Bounds {
  Point lower;
  Point upper;

  Bounds() = default;
  Bounds(Point lo, Point hi) : lower(std::move(lo)), upper(std::move(hi)) { validate(); }

  static Bounds uniform(std::size_t dim, double lo, double hi) {
    return Bounds(Point(dim, lo), Point(dim, hi));
  }

  std::size_t dim() const noexcept { return lower.size(); }
  double width(std::size_t i) const { return upper[i] - lower[i]; }

  bool contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    return true;
  }

  void clip(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  }

  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= width(i);
    return v;
  }

  void validate() const {
    if (lower.size() != upper.size()) throw DimensionError("bounds: lower/upper length mismatch");
    if (lower.empty()) throw DimensionError("bounds: zero dimensions");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
        throw DimensionError("bounds: non-finite entry in dimension " + std::to_string(i + 1));
      if (!(lower[i] < upper[i]))
        throw DimensionError("bounds: lower >= upper in dimension " + std::to_string(i + 1));
    }
  }
};

/// Inequality constraint g(x) <= 0.
struct ConstraintFn {
  std::string label;
  Objective g;

  double operator()(std::span<const double> x) const { return g(x); }

  static ConstraintFn from_expr(std::string label, Expr e) {
    auto shared = std::make_shared<const Expr>(std::move(e));
    return {std::move(label), [shared](std::span<const double> x) { return shared->eval(x); }};
  }
};

struct Evaluation {
  Point point;  // the point actually evaluated (after snapping)
  double objective = 0.0;
  std::vector<double> violations;  // raw g_i values
  bool feasible = true;

  double max_violation() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double g : violations) m = std::max(m, g);
    return violations.empty() ? 0.0 : m;
  }
};

struct ProblemSpec {
  std::string name;
  Bounds bounds;
  Objective objective;
  std::vector<ConstraintFn> constraints;
  /// Per-dimension grid step; 0 means continuous. Empty means all continuous.
  std::vector<double> discrete_steps;
  double feasibility_tol = kDefaultFeasibilityTol;

  std::size_t dim() const noexcept { return bounds.dim(); }
  bool constrained() const noexcept { return !constraints.empty(); }

  double step(std::size_t i) const {
    return i < discrete_steps.size() ? discrete_steps[i] : 0.0;
  }

  /// Moves discrete coordinates to the nearest admissible grid value
  /// lower + k*step that lies inside the bounds.
  void snap(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size() && i < discrete_steps.size(); ++i) {
      double s = discrete_steps[i];
      if (s <= 0.0) continue;
      double lo = bounds.lower[i];
      double kmax = std::floor((bounds.upper[i] - lo) / s + 1e-9);
      double k = std::clamp(std::round((x[i] - lo) / s), 0.0, kmax);
      x[i] = lo + k * s;
    }
  }

  void validate() const {
    bounds.validate();
    if (!objective) throw ConfigError("problem '" + name + "' has no objective");
    if (!discrete_steps.empty() && discrete_steps.size() != dim())
      throw ConfigError("discrete steps length does not match dimension");
    for (std::size_t i = 0; i < discrete_steps.size(); ++i) {
      double s = discrete_steps[i];
      if (s < 0.0 || !std::isfinite(s)) throw ConfigError("invalid discrete step");
      if (s > 0.0 && bounds.width(i) / s < 1.0 - 1e-9)
        throw ConfigError("discrete step admits fewer than two values in dimension " +
                          std::to_string(i + 1));
    }
  }
};

/// Snaps (when discrete), then evaluates objective and all constraints.
inline Evaluation evaluate(const ProblemSpec& p, std::span<const double> x) {
  if (x.size() != p.dim())
    throw DimensionError("point has " + std::to_string(x.size()) + " coordinates, problem '" +
                         p.name + "' has " + std::to_string(p.dim()));
  Evaluation ev;
  ev.point.assign(x.begin(), x.end());
  p.snap(ev.point);
  if (!p.bounds.contains(ev.point)) throw DimensionError("point outside bounds of '" + p.name + "'");
  ev.objective = p.objective(ev.point);
  ev.violations.reserve(p.constraints.size());
  for (const auto& c : p.constraints) {
    double g = c(ev.point);
    ev.violations.push_back(g);
    if (!(g <= p.feasibility_tol)) ev.feasible = false;
  }
  return ev;
}

}  // namespace labopt

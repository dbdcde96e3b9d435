#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "labopt/problem.hpp"

namespace labopt {

/// Axis-aligned region [min, max] produced by search space reduction.
/// Unlike Bounds, a dimension may be degenerate (min == max).
struct ClusterBox {
  int id = 0;
  Point min;
  Point max;
  std::size_t point_count = 0;

  std::size_t dim() const noexcept { return min.size(); }

  bool contains(std::span<const double> x) const {
    if (x.size() != min.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= min[i] && x[i] <= max[i])) return false;
    return true;
  }

  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < min.size(); ++i) v *= max[i] - min[i];
    return v;
  }

  void clip(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], min[i], max[i]);
  }

  static ClusterBox from_bounds(const Bounds& b, int id = 0) { return {id, b.lower, b.upper, 0}; }
};

}  // namespace labopt

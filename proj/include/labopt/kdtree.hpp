#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "labopt/error.hpp"
#include "labopt/problem.hpp"

namespace labopt {

/// Row-major point storage: point k occupies data[k*dim .. k*dim + dim).
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> data;

  PointSet() = default;
  explicit PointSet(std::size_t d) : dim(d) {}

  static PointSet from_points(const std::vector<Point>& pts) {
    PointSet s(pts.empty() ? 0 : pts.front().size());
    s.data.reserve(pts.size() * s.dim);
    for (const auto& p : pts) s.push_back(p);
    return s;
  }

  std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
  bool empty() const noexcept { return size() == 0; }

  std::span<const double> operator[](std::size_t k) const { return {data.data() + k * dim, dim}; }

  void push_back(std::span<const double> p) {
    if (p.size() != dim) throw DimensionError("point set: dimension mismatch");
    data.insert(data.end(), p.begin(), p.end());
  }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

/// Balanced k-d tree stored implicitly: every subrange [lo, hi) of `order_`
/// has its splitting point at the lower median position and the split axis
/// is depth mod dim.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(PointSet points) : points_(std::move(points)) {
    order_.resize(points_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    build(0, order_.size(), 0);
  }

  explicit KdTree(const std::vector<Point>& points) : KdTree(PointSet::from_points(points)) {}

  std::size_t size() const noexcept { return order_.size(); }
  std::size_t dim() const noexcept { return points_.dim; }
  const PointSet& points() const noexcept { return points_; }

  /// Indices (into the build input) of all points within the closed ball, ascending.
  std::vector<std::size_t> range(std::span<const double> center, double radius) const {
    check_query(center, radius);
    std::vector<std::size_t> out;
    visit(0, order_.size(), 0, center, radius * radius, radius, [&](std::size_t k) {
      out.push_back(k);
      return false;
    });
    std::sort(out.begin(), out.end());
    return out;
  }

  /// True when at least one point lies within the closed ball.
  bool any_within(std::span<const double> center, double radius) const {
    check_query(center, radius);
    return visit(0, order_.size(), 0, center, radius * radius, radius, [](std::size_t) { return true; });
  }

  /// Number of points within the closed ball, counting stops at `limit`.
  std::size_t count_within(std::span<const double> center, double radius, std::size_t limit) const {
    check_query(center, radius);
    std::size_t n = 0;
    if (limit == 0) return 0;
    visit(0, order_.size(), 0, center, radius * radius, radius, [&](std::size_t) { return ++n >= limit; });
    return n;
  }

  /// Tracks which points are still "live" so that repeated range queries can
  /// skip subtrees whose points have all been consumed.
  class LiveSet {
   public:
    explicit LiveSet(const KdTree& t) : tree_(&t), live_(t.order_.size()), pos_(t.order_.size()), removed_(t.order_.size(), 0) {
      for (std::size_t i = 0; i < t.order_.size(); ++i) pos_[t.order_[i]] = i;
      fill(0, t.order_.size());
    }

    /// Removes point k (an index into the build input). No-op if already removed.
    void remove(std::size_t k) {
      std::size_t target = pos_[k], lo = 0, hi = tree_->order_.size();
      if (removed_[target]) return;
      removed_[target] = 1;
      while (lo < hi) {
        std::size_t mid = mid_of(lo, hi);
        --live_[mid];
        if (target == mid) break;
        if (target < mid) hi = mid; else lo = mid + 1;
      }
    }

    /// Calls hit(k) for every live point in the closed ball (unspecified order).
    template <typename Hit>
    void range(std::span<const double> center, double radius, Hit&& hit) const {
      tree_->check_query(center, radius);
      walk(0, tree_->order_.size(), 0, center, radius * radius, radius, hit);
    }

   private:
    std::size_t fill(std::size_t lo, std::size_t hi) {
      if (lo >= hi) return 0;
      std::size_t mid = mid_of(lo, hi);
      live_[mid] = 1 + fill(lo, mid) + fill(mid + 1, hi);
      return live_[mid];
    }

    template <typename Hit>
    void walk(std::size_t lo, std::size_t hi, std::size_t depth, std::span<const double> c, double r2, double r,
              Hit& hit) const {
      if (lo >= hi) return;
      const std::size_t mid = mid_of(lo, hi);
      if (live_[mid] == 0) return;
      const std::size_t k = tree_->order_[mid];
      auto p = tree_->points_[k];
      if (!removed_[mid] && squared_distance(p, c) <= r2) hit(k);
      const std::size_t axis = depth % tree_->points_.dim;
      const double delta = c[axis] - p[axis];
      if (delta - r <= 0.0) walk(lo, mid, depth + 1, c, r2, r, hit);
      if (delta + r >= 0.0) walk(mid + 1, hi, depth + 1, c, r2, r, hit);
    }

    const KdTree* tree_;
    std::vector<std::size_t> live_;  // live points in the subtree rooted at each position
    std::vector<std::size_t> pos_;
    std::vector<char> removed_;      // by position in the tree order
  };

  /// Every stored index in tree order (pre-order).
  std::vector<std::size_t> enumerate() const {
    std::vector<std::size_t> out;
    out.reserve(order_.size());
    preorder(0, order_.size(), out);
    return out;
  }

  /// Number of levels (0 for an empty tree).
  std::size_t depth() const { return depth_of(order_.size()); }

 private:
  static std::size_t mid_of(std::size_t lo, std::size_t hi) { return lo + (hi - lo - 1) / 2; }

  static std::size_t depth_of(std::size_t n) {
    if (n == 0) return 0;
    std::size_t left = (n - 1) / 2;
    return 1 + std::max(depth_of(left), depth_of(n - 1 - left));
  }

  void build(std::size_t lo, std::size_t hi, std::size_t depth) {
    if (hi - lo <= 1) return;
    const std::size_t axis = depth % points_.dim;
    const std::size_t mid = mid_of(lo, hi);
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](std::size_t a, std::size_t b) {
                       double va = points_[a][axis], vb = points_[b][axis];
                       return va < vb || (va == vb && a < b);
                     });
    build(lo, mid, depth + 1);
    build(mid + 1, hi, depth + 1);
  }

  void check_query(std::span<const double> center, double radius) const {
    if (!(radius >= 0.0)) throw ConfigError("range radius must be >= 0");
    if (!order_.empty() && center.size() != points_.dim)
      throw DimensionError("range query: centre has " + std::to_string(center.size()) +
                           " coordinates, tree has " + std::to_string(points_.dim));
  }

  // Calls hit(k) for each point in the ball; stops early when hit returns true.
  template <typename Hit>
  bool visit(std::size_t lo, std::size_t hi, std::size_t depth, std::span<const double> c, double r2,
             double r, Hit&& hit) const {
    if (lo >= hi) return false;
    const std::size_t mid = mid_of(lo, hi);
    const std::size_t k = order_[mid];
    auto p = points_[k];
    if (squared_distance(p, c) <= r2 && hit(k)) return true;
    const std::size_t axis = depth % points_.dim;
    const double delta = c[axis] - p[axis];
    if (delta - r <= 0.0 && visit(lo, mid, depth + 1, c, r2, r, hit)) return true;
    if (delta + r >= 0.0 && visit(mid + 1, hi, depth + 1, c, r2, r, hit)) return true;
    return false;
  }

  void preorder(std::size_t lo, std::size_t hi, std::vector<std::size_t>& out) const {
    if (lo >= hi) return;
    std::size_t mid = mid_of(lo, hi);
    out.push_back(order_[mid]);
    preorder(lo, mid, out);
    preorder(mid + 1, hi, out);
  }

  PointSet points_;
  std::vector<std::size_t> order_;
};

}  // namespace labopt

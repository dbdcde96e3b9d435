#pragma once

#include <cstddef>
#include <vector>

#include "labopt/error.hpp"
#include "labopt/kdtree.hpp"

namespace labopt {

struct DbscanParams {
  double eps = 1.0;
  std::size_t min_pts = 1;

  void validate() const {
    if (!(eps > 0.0)) throw ConfigError("dbscan eps must be > 0");
    if (min_pts < 1) throw ConfigError("dbscan min_pts must be >= 1");
  }
};

inline constexpr int kNoise = -1;

struct ClusterLabels {
  std::vector<int> label;  // cluster id >= 0 or kNoise
  int cluster_count = 0;
  std::vector<bool> core;
};

/// Density clustering over closed eps-balls that count the point itself.
/// Points are scanned in ascending index order, so ids and border
/// assignment are deterministic.
inline ClusterLabels dbscan(const PointSet& points, const DbscanParams& params) {
  params.validate();
  const std::size_t n = points.size();
  ClusterLabels out;
  out.label.assign(n, kNoise);
  out.core.assign(n, false);
  if (n == 0) return out;

  KdTree tree(points);
  for (std::size_t i = 0; i < n; ++i)
    out.core[i] = tree.count_within(points[i], params.eps, params.min_pts) >= params.min_pts;

  // Expansion only ever needs unlabelled neighbours, so labelled points are
  // removed from the search structure as soon as they join a cluster.
  KdTree::LiveSet unlabelled(tree);

  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.core[i] || out.label[i] != kNoise) continue;
    const int id = out.cluster_count++;
    out.label[i] = id;
    unlabelled.remove(i);
    stack.assign(1, i);
    std::vector<std::size_t> found;
    while (!stack.empty()) {
      std::size_t p = stack.back();
      stack.pop_back();
      found.clear();
      unlabelled.range(points[p], params.eps, [&](std::size_t q) { found.push_back(q); });
      for (std::size_t q : found) {
        out.label[q] = id;
        unlabelled.remove(q);
        if (out.core[q]) stack.push_back(q);
      }
    }
  }
  return out;
}

inline ClusterLabels dbscan(const std::vector<Point>& points, const DbscanParams& params) {
  return dbscan(PointSet::from_points(points), params);
}

}  // namespace labopt

#pragma once

// Clustering-based search space reduction: sample a regular grid, keep the
// points that satisfy each constraint, retain points of one subset lying close
// to another subset, cluster what is left and return the clusters' boxes.

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "labopt/cluster_box.hpp"
#include "labopt/dbscan.hpp"
#include "labopt/error.hpp"
#include "labopt/kdtree.hpp"
#include "labopt/problem.hpp"

namespace labopt {

inline constexpr std::size_t kDefaultMaxGridPoints = 5'000'000;

/// Unset optionals are resolved from the grid spacing (see resolve()).
struct CssrConfig {
  std::size_t e = 51;
  std::optional<double> max_dist;
  std::optional<double> eps;
  std::optional<std::size_t> min_pts;
  std::size_t max_grid_points = kDefaultMaxGridPoints;
};

struct ResolvedCssrParams {
  std::size_t e = 0;
  double max_dist = 0.0;
  double eps = 0.0;
  std::size_t min_pts = 0;
};

/// e^n, or nullopt when it exceeds `cap`.
inline std::optional<std::size_t> grid_size(std::size_t e, std::size_t n, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / e) return std::nullopt;
    total *= e;
  }
  if (total > cap) return std::nullopt;
  return total;
}

/// Per-dimension grid spacing (upper - lower) / (e - 1).
inline std::vector<double> grid_spacing(const Bounds& b, std::size_t e) {
  std::vector<double> h(b.dim());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = b.width(i) / static_cast<double>(e - 1);
  return h;
}

inline ResolvedCssrParams resolve(const CssrConfig& cfg, const Bounds& b) {
  if (cfg.e < 2) throw ConfigError("points per dimension must be >= 2");
  ResolvedCssrParams r;
  r.e = cfg.e;
  double diag = 0.0;
  for (double hi : grid_spacing(b, cfg.e)) diag += hi * hi;
  diag = std::sqrt(diag);
  r.max_dist = cfg.max_dist.value_or(2.0 * diag);
  r.eps = cfg.eps.value_or(r.max_dist);
  r.min_pts = cfg.min_pts.value_or(2 * b.dim());
  if (!(r.max_dist >= 0.0)) throw ConfigError("max_dist must be >= 0");
  if (!(r.eps > 0.0)) throw ConfigError("eps must be > 0");
  if (r.min_pts < 1) throw ConfigError("min_pts must be >= 1");
  return r;
}

/// All e^N grid points, dimension 0 varying slowest. Coordinates are
/// lower + k*h, with the last one pinned to upper.
inline PointSet generate_grid(const Bounds& b, std::size_t e, std::size_t cap = kDefaultMaxGridPoints) {
  if (e < 2) throw ConfigError("points per dimension must be >= 2");
  const std::size_t n = b.dim();
  auto total = grid_size(e, n, cap);
  if (!total)
    throw GridTooLarge(std::to_string(e) + "^" + std::to_string(n) + " grid points exceed the cap of " +
                       std::to_string(cap) + "; reduce the points per dimension");
  std::vector<std::vector<double>> axis(n, std::vector<double>(e));
  for (std::size_t i = 0; i < n; ++i) {
    double h = b.width(i) / static_cast<double>(e - 1);
    for (std::size_t k = 0; k < e; ++k) axis[i][k] = b.lower[i] + static_cast<double>(k) * h;
    axis[i][e - 1] = b.upper[i];
  }
  PointSet grid(n);
  grid.data.resize(*total * n);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t k = 0; k < *total; ++k) {
    double* row = grid.data.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) row[i] = axis[i][digit[i]];
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < e) break;
      digit[i] = 0;
    }
  }
  return grid;
}

/// Indices of the points with g(x) <= 0, in enumeration order.
inline std::vector<std::size_t> filter_by_constraint(const PointSet& points, const ConstraintFn& c) {
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (c(points[k]) <= 0.0) keep.push_back(k);
  return keep;
}

inline PointSet gather(const PointSet& points, const std::vector<std::size_t>& idx) {
  PointSet out(points.dim);
  out.data.reserve(idx.size() * points.dim);
  for (std::size_t k : idx) out.push_back(points[k]);
  return out;
}

/// Union over ordered pairs (i, j), i != j, of the members of subset j lying
/// within max_dist of some member of subset i. Subsets hold indices into
/// `points`; the result is ascending and free of duplicates. A single subset
/// is returned unchanged.
inline std::vector<std::size_t> close_points(const PointSet& points,
                                             const std::vector<std::vector<std::size_t>>& subsets,
                                             double max_dist) {
  if (subsets.empty()) throw ConfigError("close_points needs at least one subset");
  if (subsets.size() == 1) return subsets.front();

  std::vector<KdTree> trees;
  trees.reserve(subsets.size());
  for (const auto& s : subsets) trees.emplace_back(gather(points, s));

  std::vector<char> keep(points.size(), 0);
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    for (std::size_t k : subsets[j]) {
      if (keep[k]) continue;
      for (std::size_t i = 0; i < subsets.size(); ++i) {
        if (i != j && trees[i].any_within(points[k], max_dist)) {
          keep[k] = 1;
          break;
        }
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < keep.size(); ++k)
    if (keep[k]) out.push_back(k);
  return out;
}

/// One box per cluster id over that cluster's points; noise is ignored.
inline std::vector<ClusterBox> make_cluster_boxes(const ClusterLabels& labels, const PointSet& points) {
  if (labels.label.size() != points.size()) throw DimensionError("labels and points differ in length");
  if (labels.cluster_count == 0) throw AllNoise("every retained point was classified as noise; "
                                                "try a larger eps, a smaller min_pts or more grid points");
  std::vector<ClusterBox> boxes(static_cast<std::size_t>(labels.cluster_count));
  for (std::size_t c = 0; c < boxes.size(); ++c) {
    boxes[c].id = static_cast<int>(c);
    boxes[c].min.assign(points.dim, std::numeric_limits<double>::infinity());
    boxes[c].max.assign(points.dim, -std::numeric_limits<double>::infinity());
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    int id = labels.label[k];
    if (id < 0) continue;
    ClusterBox& b = boxes[static_cast<std::size_t>(id)];
    auto p = points[k];
    for (std::size_t i = 0; i < points.dim; ++i) {
      b.min[i] = std::min(b.min[i], p[i]);
      b.max[i] = std::max(b.max[i], p[i]);
    }
    ++b.point_count;
  }
  return boxes;
}

struct CssrResult {
  ResolvedCssrParams params;
  std::size_t grid_points = 0;
  std::vector<std::size_t> subset_sizes;
  std::size_t combined_points = 0;
  std::size_t noise_points = 0;
  std::vector<ClusterBox> boxes;

  /// Sum of box volumes over the volume of the original bounds.
  double volume_ratio(const Bounds& b) const {
    double v = 0.0;
    for (const auto& box : boxes) v += box.volume();
    return v / b.volume();
  }
};

inline CssrResult reduce(const ProblemSpec& p, const CssrConfig& cfg) {
  if (!p.constrained()) throw ConfigError("problem '" + p.name + "' has no constraints to reduce");
  CssrResult r;
  r.params = resolve(cfg, p.bounds);
  PointSet grid = generate_grid(p.bounds, r.params.e, cfg.max_grid_points);
  r.grid_points = grid.size();

  std::vector<std::vector<std::size_t>> subsets;
  for (const auto& c : p.constraints) {
    subsets.push_back(filter_by_constraint(grid, c));
    r.subset_sizes.push_back(subsets.back().size());
    if (subsets.back().empty())
      throw EmptyFeasible("no grid point satisfies constraint '" + c.label +
                          "'; increase the points per dimension");
  }

  std::vector<std::size_t> combined = close_points(grid, subsets, r.params.max_dist);
  r.combined_points = combined.size();
  if (combined.empty())
    throw AllNoise("no grid point lies within max_dist of another constraint's subset; increase max_dist");
  PointSet pts = gather(grid, combined);
  ClusterLabels labels = dbscan(pts, {r.params.eps, r.params.min_pts});
  for (int l : labels.label) r.noise_points += l < 0 ? 1 : 0;
  r.boxes = make_cluster_boxes(labels, pts);
  return r;
}

// ---- clusters.json ------------------------------------------------------

inline nlohmann::json clusters_to_json(const std::string& problem, const CssrResult& r) {
  nlohmann::json j;
  j["problem"] = problem;
  j["config"] = {{"e", r.params.e}, {"max_dist", r.params.max_dist}, {"eps", r.params.eps},
                 {"min_pts", r.params.min_pts}};
  j["clusters"] = nlohmann::json::array();
  for (const auto& b : r.boxes)
    j["clusters"].push_back({{"id", b.id}, {"min", b.min}, {"max", b.max}, {"points", b.point_count}});
  return j;
}

inline void write_clusters(const std::string& path, const std::string& problem, const CssrResult& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << clusters_to_json(problem, r).dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

struct ClustersFile {
  std::string problem;
  std::vector<ClusterBox> boxes;
};

inline ClustersFile clusters_from_json(const nlohmann::json& j) {
  ClustersFile f;
  try {
    f.problem = j.value("problem", std::string{});
    for (const auto& c : j.at("clusters")) {
      ClusterBox b;
      b.id = c.at("id").get<int>();
      b.min = c.at("min").get<std::vector<double>>();
      b.max = c.at("max").get<std::vector<double>>();
      b.point_count = c.value("points", std::size_t{0});
      if (b.min.size() != b.max.size() || b.min.empty())
        throw ConfigError("cluster " + std::to_string(b.id) + ": min/max lengths differ or are empty");
      for (std::size_t i = 0; i < b.min.size(); ++i)
        if (!(b.min[i] <= b.max[i]))
          throw ConfigError("cluster " + std::to_string(b.id) + ": min > max in dimension " +
                            std::to_string(i + 1));
      f.boxes.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed clusters file: ") + e.what());
  }
  if (f.boxes.empty()) throw ConfigError("clusters file lists no clusters");
  return f;
}

inline ClustersFile read_clusters(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open clusters file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("clusters file '" + path + "': " + e.what(), e.byte);
  }
  return clusters_from_json(j);
}

}  // namespace labopt

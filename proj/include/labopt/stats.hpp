#pragma once

// Paired and multi-sample rank tests for comparing optimizer results.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "labopt/error.hpp"

namespace labopt {

/// Average ranks (1-based) of `v`; equal values share the mean of their positions.
/// `tie_sizes`, when given, receives the size of every tie group larger than one.
inline std::vector<double> average_ranks(std::span<const double> v, std::vector<std::size_t>* tie_sizes = nullptr) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    if (tie_sizes && j > i) tie_sizes->push_back(j - i + 1);
    i = j + 1;
  }
  return rank;
}

enum class PValueMethod { Exact, NormalApprox };

struct SignedRankResult {
  double t_plus = 0;
  double t_minus = 0;
  std::size_t n_effective = 0;
  double p_value = 1;
  PValueMethod method = PValueMethod::Exact;
};

inline constexpr std::size_t kExactWilcoxonLimit = 25;

/// Number of sign assignments of ranks 1..n whose positive-rank sum equals s, for every s.
inline std::vector<double> signed_rank_counts(std::size_t n) {
  const std::size_t max_sum = n * (n + 1) / 2;
  std::vector<double> count(max_sum + 1, 0.0);
  count[0] = 1.0;
  for (std::size_t r = 1; r <= n; ++r)
    for (std::size_t s = max_sum; s >= r; --s) count[s] += count[s - r];
  return count;
}

/// Two-sided Wilcoxon signed-rank test on the paired differences a - b.
/// Zero differences are dropped. Exact null distribution for up to 25
/// untied differences, otherwise the tie-corrected normal approximation
/// without continuity correction.
inline SignedRankResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("wilcoxon: samples differ in length");
  if (a.empty()) throw ConfigError("wilcoxon: empty samples");

  std::vector<double> absd;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    if (d == 0.0) continue;
    absd.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }

  SignedRankResult r;
  r.n_effective = absd.size();
  if (absd.empty()) return r;

  std::vector<std::size_t> ties;
  std::vector<double> rank = average_ranks(absd, &ties);
  for (std::size_t i = 0; i < rank.size(); ++i) (positive[i] ? r.t_plus : r.t_minus) += rank[i];

  const double n = static_cast<double>(r.n_effective);
  if (r.n_effective <= kExactWilcoxonLimit && ties.empty()) {
    r.method = PValueMethod::Exact;
    std::vector<double> count = signed_rank_counts(r.n_effective);
    auto t = static_cast<std::size_t>(std::llround(std::min(r.t_plus, r.t_minus)));
    double tail = 0.0;
    for (std::size_t s = 0; s <= t; ++s) tail += count[s];
    r.p_value = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(r.n_effective)));
    return r;
  }

  r.method = PValueMethod::NormalApprox;
  double mean = n * (n + 1) / 4.0;
  double var = n * (n + 1) * (2 * n + 1) / 24.0;
  for (std::size_t t : ties) {
    double tt = static_cast<double>(t);
    var -= (tt * tt * tt - tt) / 48.0;
  }
  if (var <= 0.0) {
    r.p_value = 1.0;
    return r;
  }
  double z = (r.t_plus - mean) / std::sqrt(var);
  r.p_value = std::clamp(std::erfc(std::fabs(z) / std::sqrt(2.0)), 0.0, 1.0);
  return r;
}

struct FriedmanResult {
  std::vector<double> mean_ranks;   // one per algorithm
  std::vector<std::size_t> ordering;  // 1 = best (lowest mean rank); ties share the lower position
  double statistic = 0;             // chi-square
};

/// rows = problems, columns = algorithms; lower values rank better.
inline FriedmanResult friedman(const std::vector<std::vector<double>>& results) {
  if (results.empty()) throw ConfigError("friedman: no problems");
  const std::size_t k = results.front().size();
  if (k < 2) throw ConfigError("friedman: need at least two algorithms");
  FriedmanResult r;
  r.mean_ranks.assign(k, 0.0);
  for (const auto& row : results) {
    if (row.size() != k) throw ConfigError("friedman: rows differ in length");
    std::vector<double> rank = average_ranks(row);
    for (std::size_t j = 0; j < k; ++j) r.mean_ranks[j] += rank[j];
  }
  const double n = static_cast<double>(results.size());
  const double kk = static_cast<double>(k);
  double sum_sq = 0.0;
  for (double& m : r.mean_ranks) {
    m /= n;
    sum_sq += (m - (kk + 1) / 2) * (m - (kk + 1) / 2);
  }
  r.statistic = 12.0 * n / (kk * (kk + 1)) * sum_sq;
  r.ordering.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t better = 0;
    for (std::size_t i = 0; i < k; ++i) better += r.mean_ranks[i] < r.mean_ranks[j] ? 1 : 0;
    r.ordering[j] = better + 1;
  }
  return r;
}

}  // namespace labopt

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "labopt/rng.hpp"
#include "labopt/stats.hpp"

using namespace labopt;
using Catch::Approx;

namespace {

// Two-sided exact p-value by enumerating every sign pattern of ranks 1..n.
double enumerated_p(std::size_t n, double t_min) {
  std::size_t hits = 0;
  const std::size_t total = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < total; ++mask) {
    double plus = 0;
    for (std::size_t r = 0; r < n; ++r)
      if (mask >> r & 1) plus += static_cast<double>(r + 1);
    double minus = static_cast<double>(n * (n + 1)) / 2 - plus;
    if (std::min(plus, minus) <= t_min + 1e-9) ++hits;
  }
  return std::min(1.0, static_cast<double>(hits) / static_cast<double>(total));
}

}  // namespace

TEST_CASE("average ranks", "[stats]") {
  std::vector<std::size_t> ties;
  auto r = average_ranks(std::vector<double>{10, 20, 20, 5}, &ties);
  CHECK(r == std::vector<double>{2, 3.5, 3.5, 1});
  CHECK(ties == std::vector<std::size_t>{2});
}

TEST_CASE("wilcoxon on identical samples", "[stats]") {
  std::vector<double> a{1, 2, 3, 4};
  auto r = wilcoxon_signed_rank(a, a);
  CHECK(r.p_value == 1.0);
  CHECK(r.n_effective == 0);
  CHECK(r.t_plus == 0);
  CHECK(r.t_minus == 0);
}

TEST_CASE("wilcoxon with thirty one-sided differences", "[stats]") {
  std::vector<double> a(30), b(30);
  for (std::size_t i = 0; i < 30; ++i) {
    a[i] = 1e-6 * static_cast<double>(i + 1);
    b[i] = 1.0 + static_cast<double>(i);
  }
  auto r = wilcoxon_signed_rank(a, b);
  CHECK(r.t_plus == 0);
  CHECK(r.t_minus == 465);
  CHECK(r.method == PValueMethod::NormalApprox);
  CHECK(r.p_value == Approx(1.7311e-6).epsilon(0.01));
  auto flipped = wilcoxon_signed_rank(b, a);
  CHECK(flipped.t_plus == 465);
  CHECK(flipped.t_minus == 0);
  CHECK(flipped.p_value == r.p_value);
}

TEST_CASE("exact p-values agree with sign-pattern enumeration", "[stats][property]") {
  for (std::size_t n = 1; n <= 10; ++n) {
    auto counts = signed_rank_counts(n);
    double total = 0;
    for (double c : counts) total += c;
    CHECK(total == std::ldexp(1.0, static_cast<int>(n)));
    const std::size_t patterns = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      std::vector<double> a(n), b(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i & 1 ? 1.0 : -1.0) * static_cast<double>(i + 1);
      auto r = wilcoxon_signed_rank(a, b);
      REQUIRE(r.method == PValueMethod::Exact);
      CHECK(r.t_plus + r.t_minus == static_cast<double>(n * (n + 1) / 2));
      CHECK(r.p_value == Approx(enumerated_p(n, std::min(r.t_plus, r.t_minus))).epsilon(1e-12));
    }
  }
}

TEST_CASE("five paired samples", "[stats]") {
  std::vector<double> a{1.1, 2.3, 0.4, 5.0, 3.2}, b{1.0, 2.0, 1.0, 4.0, 3.0};
  // differences 0.1, 0.3, -0.6, 1.0, 0.2 -> ranks 1, 3, 4, 5, 2
  auto r = wilcoxon_signed_rank(a, b);
  CHECK(r.t_plus == 11);
  CHECK(r.t_minus == 4);
  CHECK(r.method == PValueMethod::Exact);
  CHECK(r.p_value == Approx(2.0 * 7 / 32));
}

TEST_CASE("swapping samples swaps the rank sums", "[stats][property]") {
  Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.index(40);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::round(rng.uniform(-5, 5));
      b[i] = std::round(rng.uniform(-5, 5));
    }
    auto ab = wilcoxon_signed_rank(a, b);
    auto ba = wilcoxon_signed_rank(b, a);
    CHECK(ab.t_plus == ba.t_minus);
    CHECK(ab.t_minus == ba.t_plus);
    CHECK(ab.p_value == Approx(ba.p_value).epsilon(1e-12));
    CHECK(ab.p_value >= 0.0);
    CHECK(ab.p_value <= 1.0);
  }
}

TEST_CASE("normal approximation tracks the exact tail", "[stats]") {
  for (std::size_t n = 20; n <= 25; ++n) {
    auto counts = signed_rank_counts(n);
    double total = std::ldexp(1.0, static_cast<int>(n));
    double mean = n * (n + 1) / 4.0, sd = std::sqrt(n * (n + 1) * (2.0 * n + 1) / 24.0);
    for (std::size_t t = 0; t <= n * (n + 1) / 4; t += 7) {
      double tail = 0;
      for (std::size_t s = 0; s <= t; ++s) tail += counts[s];
      double exact = std::min(1.0, 2 * tail / total);
      double approx = std::erfc(std::fabs((static_cast<double>(t) - mean) / sd) / std::sqrt(2.0));
      CHECK(std::fabs(exact - approx) < 0.03);
    }
  }
}

TEST_CASE("wilcoxon input validation", "[stats]") {
  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{1}, std::vector<double>{1, 2}), ConfigError);
  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{}, std::vector<double>{}), ConfigError);
}

TEST_CASE("friedman ranks on a small table", "[stats]") {
  std::vector<std::vector<double>> t{{1, 2, 3}, {2, 1, 3}, {3, 1, 2}};
  auto r = friedman(t);
  CHECK(r.mean_ranks[0] == Approx(2.0));
  CHECK(r.mean_ranks[1] == Approx(4.0 / 3.0));
  CHECK(r.mean_ranks[2] == Approx(8.0 / 3.0));
  CHECK(r.ordering == std::vector<std::size_t>{2, 1, 3});
  CHECK(r.statistic == Approx(12.0 * 3 / 12 * (0 + 4.0 / 9 + 4.0 / 9)));

  std::vector<std::vector<double>> tie{{1, 1, 2}, {1, 1, 2}};
  auto s = friedman(tie);
  CHECK(s.mean_ranks == std::vector<double>{1.5, 1.5, 3});
  CHECK(s.ordering == std::vector<std::size_t>{1, 1, 3});

  CHECK_THROWS_AS(friedman({}), ConfigError);
  CHECK_THROWS_AS(friedman({{1}}), ConfigError);
  CHECK_THROWS_AS(friedman({{1, 2}, {1, 2, 3}}), ConfigError);
}

TEST_CASE("friedman is equivariant and rank based", "[stats][property]") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng.index(8), k = 2 + rng.index(5);
    std::vector<std::vector<double>> t(n, std::vector<double>(k));
    for (auto& row : t)
      for (double& v : row) v = std::round(rng.uniform(0, 6));
    auto base = friedman(t);

    std::vector<std::size_t> perm(k);
    for (std::size_t j = 0; j < k; ++j) perm[j] = j;
    rng.shuffle(perm);
    auto permuted = t;
    auto transformed = t;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        permuted[i][j] = t[i][perm[j]];
        transformed[i][j] = std::exp(t[i][j]) + 3;
      }
    auto p = friedman(permuted);
    auto m = friedman(transformed);
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(p.mean_ranks[j] == Approx(base.mean_ranks[perm[j]]));
      CHECK(p.ordering[j] == base.ordering[perm[j]]);
      CHECK(m.mean_ranks[j] == base.mean_ranks[j]);
    }
    CHECK(p.statistic == Approx(base.statistic).margin(1e-12));
    CHECK(m.statistic == base.statistic);
  }
}

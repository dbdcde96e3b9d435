#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "labopt/benchmarks.hpp"
#include "labopt/lab.hpp"

using namespace labopt;
using Catch::Approx;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Population uniform_population(const ProblemSpec& p, const Point& x, std::size_t groups, std::size_t n) {
  Population pop;
  pop.groups.resize(groups);
  double v = p.objective(x);
  for (auto& g : pop.groups)
    for (std::size_t j = 0; j < n; ++j) {
      Individual ind;
      ind.position = x;
      ind.value = v;
      ind.interval.resize(p.dim());
      for (std::size_t i = 0; i < p.dim(); ++i) ind.interval[i] = p.bounds.width(i) / 2.0;
      g.members.push_back(ind);
    }
  return pop;
}

}  // namespace

TEST_CASE("reciprocal probabilities on small inputs", "[lab]") {
  auto p = reciprocal_probabilities(std::vector<double>{1, 1, 1, 1});
  for (double v : p) CHECK(v == Approx(0.25));
  p = reciprocal_probabilities(std::vector<double>{1, 3});
  CHECK(p[0] == Approx(0.75));
  CHECK(p[1] == Approx(0.25));
  auto q = reciprocal_probabilities(std::vector<double>{2, 6});
  CHECK(q[0] == Approx(0.75));
  CHECK(q[1] == Approx(0.25));

  // With a non-positive entry the shift rule applies: [-1, 1] -> [2e-6, 2 + 2e-6].
  auto s = reciprocal_probabilities(std::vector<double>{-1, 1});
  double a = 1.0 / 2e-6, b = 1.0 / (2.0 + 2e-6);
  CHECK(s[0] == Approx(a / (a + b)).epsilon(1e-12));
  CHECK(s[0] > s[1]);
  auto flat = reciprocal_probabilities(std::vector<double>{-3, -3, -3});
  for (double v : flat) CHECK(v == Approx(1.0 / 3.0));

  CHECK_THROWS_AS(reciprocal_probabilities(std::vector<double>{0, 1}, ProbabilityMode::Raw), EvalError);
  CHECK_THROWS_AS(reciprocal_probabilities(std::vector<double>{NAN, 1}), EvalError);
  CHECK_THROWS_AS(reciprocal_probabilities(std::vector<double>{}), ConfigError);
}

TEST_CASE("probabilities sum to one and order inversely to values", "[lab][property]") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 1 + rng.index(12);
    bool positive = trial % 2 == 0;
    std::vector<double> v(n);
    for (double& x : v) x = positive ? rng.uniform(1e-3, 1e3) : rng.uniform(-50, 50);
    auto p = reciprocal_probabilities(v);
    CHECK(sum(p) == Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(p[i] >= 0.0);
      for (std::size_t j = 0; j < n; ++j)
        if (v[i] < v[j]) CHECK(p[i] >= p[j]);
    }
    if (positive) {
      std::vector<double> scaled4(n), scaled(n);
      for (std::size_t i = 0; i < n; ++i) {
        scaled4[i] = 4.0 * v[i];
        scaled[i] = 3.7 * v[i];
      }
      auto p4 = reciprocal_probabilities(scaled4);
      auto ps = reciprocal_probabilities(scaled);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(p4[i] == p[i]);
        CHECK(ps[i] == Approx(p[i]).margin(1e-12));
      }
    }
  }
}

TEST_CASE("roulette frequency follows probabilities", "[lab]") {
  Rng rng(11);
  std::vector<double> p{0.75, 0.25};
  int first = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) first += roulette_select(p, rng) == 0;
  double f = static_cast<double>(first) / draws;
  CHECK(f >= 0.74);
  CHECK(f <= 0.76);

  std::vector<double> z{0.0, 1.0, 0.0};
  for (int i = 0; i < 1000; ++i) CHECK(roulette_select(z, rng) == 1);
}

TEST_CASE("learning weights", "[lab]") {
  Rng rng(3);
  double mean = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto w = sample_weights(rng);
    CHECK(w.w1 + w.w2 == 1.0);
    CHECK(w.w1 >= 0.5);
    CHECK(w.w1 <= 1.0);
    CHECK(w.w1 >= w.w2);
    mean += w.w1;
  }
  mean /= draws;
  CHECK(mean >= 0.74);
  CHECK(mean <= 0.76);
}

TEST_CASE("believer update", "[lab]") {
  Bounds b = Bounds::uniform(2, -10, 10);
  Point x = update_believer(Point{0, 0}, Point{4, 8}, {0.75, 0.25}, b);
  CHECK(x[0] == Approx(1.0));
  CHECK(x[1] == Approx(2.0));
  Point y = update_believer(Point{1, 1}, Point{1, 1}, {0.6, 0.4}, b);
  CHECK(y[0] == Approx(1.0));
  CHECK(y[1] == Approx(1.0));
  Bounds narrow = Bounds::uniform(2, 0, 1);
  Point c = update_believer(Point{0.5, 0.5}, Point{3, -3}, {0.5, 0.5}, narrow);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 0.0);
  CHECK_THROWS_AS(update_believer(Point{0}, Point{0, 1}, {0.5, 0.5}, b), DimensionError);
}

TEST_CASE("believer lies in the leader-advocate box", "[lab][property]") {
  Rng rng(5);
  Bounds b = Bounds::uniform(4, -5, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    Point l(4), a(4);
    for (std::size_t i = 0; i < 4; ++i) {
      l[i] = rng.uniform(-5, 5);
      a[i] = rng.uniform(-5, 5);
    }
    auto w = sample_weights(rng);
    Point x = update_believer(l, a, w, b);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(x[i] >= std::min(l[i], a[i]) - 1e-12);
      CHECK(x[i] <= std::max(l[i], a[i]) + 1e-12);
      CHECK(std::fabs(x[i] - l[i]) <= std::fabs(x[i] - a[i]) + 1e-12);
    }
  }
}

TEST_CASE("interval shrink and widen", "[lab]") {
  Bounds b = Bounds::uniform(1, 0, 2);
  std::vector<double> hw{1.0};
  shrink_interval(hw, 0.15, b);
  CHECK(hw[0] == Approx(0.85));
  for (int k = 2; k <= 10; ++k) {
    shrink_interval(hw, 0.15, b);
    CHECK(hw[0] == Approx(std::pow(0.85, k)).epsilon(1e-12));
  }
  for (int k = 0; k < 10000; ++k) shrink_interval(hw, 0.15, b);
  CHECK(hw[0] == interval_floor(b, 0));
  std::vector<double> wide{0.9};
  widen_interval(wide, 5.0, b);
  CHECK(wide[0] == 1.0);
  double g = widen_factor(0.15, 0.2);
  CHECK(std::pow(0.85, 4) * g == Approx(1.0));
}

TEST_CASE("local sampling is greedy and stays in bounds", "[lab]") {
  ProblemSpec p = find_benchmark("sphere30").problem();
  CountingEvaluator eval(p);
  Rng rng(21);
  Individual ind;
  ind.position.assign(30, 1.0);
  ind.value = p.objective(ind.position);
  ind.interval.assign(30, 100.0);
  for (int k = 0; k < 2000; ++k) {
    double before = ind.value;
    bool ok = local_sample(ind, k % 2 ? LocalMove::FullBox : LocalMove::SingleCoordinate, rng, eval);
    CHECK(ind.value <= before);
    CHECK(ok == (ind.value < before));
    CHECK(p.bounds.contains(ind.position));
    CHECK(ind.value == p.objective(ind.position));
  }
  CHECK(eval.count() == 2000);
}

TEST_CASE("a population already at the optimum stays there", "[lab]") {
  ProblemSpec p = find_benchmark("booth").problem();
  LabConfig c;
  c.seed = 4;
  c.max_iter = 50;
  UnconstrainedLab lab(p, c);
  lab.set_population(uniform_population(p, {1, 3}, c.groups, c.n));
  RunRecord r = lab.run();
  REQUIRE(r.trace.size() == 51);
  for (double v : r.trace) CHECK(v == 0.0);
  CHECK(r.best_position == Point{1, 3});
}

TEST_CASE("zero iteration budget returns the initial best", "[lab]") {
  ProblemSpec p = find_benchmark("sphere30").problem();
  LabConfig c;
  c.seed = 8;
  c.max_iter = 0;
  RunRecord r = optimize(p, c);
  CHECK(r.iterations == 0);
  CHECK(r.evaluations == c.population());
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0] == r.best_value);
}

TEST_CASE("pure leader imitation collapses believers onto the leader", "[lab]") {
  ProblemSpec p = find_benchmark("booth").problem();
  LabConfig c;
  c.seed = 6;
  c.max_iter = 1;
  c.local_sampling = false;
  UnconstrainedLab lab(p, c);
  Population before = lab.population();
  lab.fix_leader_weight(1.0);
  lab.step();
  for (std::size_t g = 0; g < before.groups.size(); ++g) {
    const Point& leader = before.groups[g].leader().position;
    int copies = 0;
    for (const auto& m : lab.population().groups[g].members) copies += m.position == leader;
    CHECK(copies >= static_cast<int>(c.n) - 1);
  }
}

TEST_CASE("best-so-far trace is non-increasing", "[lab][property]") {
  for (const char* name : {"sphere30", "rastrigin30", "schaffer", "hartman6", "foxholes"}) {
    ProblemSpec p = find_benchmark(name).problem();
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      for (IntervalRule rule : {IntervalRule::SuccessAdaptive, IntervalRule::Geometric}) {
        LabConfig c;
        c.seed = seed;
        c.max_iter = 150;
        c.interval_rule = rule;
        RunRecord r = optimize(p, c);
        for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
        CHECK(p.bounds.contains(r.best_position));
        CHECK(r.best_value == p.objective(r.best_position));
        CHECK(r.evaluations == c.population() + r.iterations * (c.groups * c.n));
      }
    }
  }
}

TEST_CASE("geometric rule never widens any interval", "[lab][property]") {
  Rng pick(37);
  for (int trial = 0; trial < 20; ++trial) {
    ProblemSpec p = find_benchmark(trial % 2 ? "rastrigin5" : "zakharov4").problem();
    LabConfig c;
    c.seed = pick.next();
    c.interval_rule = IntervalRule::Geometric;
    c.local_move = trial % 3 ? LocalMove::SingleCoordinate : LocalMove::FullBox;
    UnconstrainedLab lab(p, c);
    auto widths = [&] {
      std::vector<double> w;
      lab.population().for_each([&](const Individual& m) { w.insert(w.end(), m.interval.begin(), m.interval.end()); });
      std::sort(w.begin(), w.end());
      return w;
    };
    std::vector<double> prev = widths();
    double prev_sum = sum(prev);
    for (int k = 0; k < 60; ++k) {
      lab.step();
      std::vector<double> now = widths();
      // Sorted elementwise domination: nothing grew, so the k-th largest cannot grow either.
      for (std::size_t i = 0; i < now.size(); ++i) CHECK(now[i] <= prev[i]);
      CHECK(sum(now) < prev_sum);
      prev_sum = sum(now);
      prev = std::move(now);
    }
  }
}

TEST_CASE("adaptive intervals stay between the floor and half the width", "[lab][property]") {
  ProblemSpec p = find_benchmark("sphere10").problem();
  LabConfig c;
  c.seed = 12;
  UnconstrainedLab lab(p, c);
  for (int k = 0; k < 300; ++k) {
    lab.step();
    lab.population().for_each([&](const Individual& m) {
      for (std::size_t i = 0; i < m.interval.size(); ++i) {
        CHECK(m.interval[i] >= interval_floor(p.bounds, i));
        CHECK(m.interval[i] <= p.bounds.width(i) / 2);
      }
    });
  }
}

TEST_CASE("a temporary problem can seed a run", "[lab]") {
  LabConfig c;
  c.seed = 14;
  c.max_iter = 30;
  UnconstrainedLab lab(find_benchmark("rastrigin5").problem(), c);
  for (int k = 0; k < 30; ++k) lab.step();
  CHECK(lab.record().trace.size() == 31);
}

TEST_CASE("constrained problems are rejected", "[lab]") {
  CHECK_THROWS_AS(UnconstrainedLab(find_benchmark("spring").problem(), LabConfig{}), ConfigError);
}

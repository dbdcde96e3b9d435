#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "labopt/benchmarks.hpp"
#include "labopt/rng.hpp"

using namespace labopt;
using Catch::Approx;

namespace {

// Independent textbook forms kept here as oracles.
double oracle_pressure_vessel(const Point& y, double c1) {
  return c1 * y[0] * y[2] * y[3] + 1.7781 * y[1] * y[2] * y[2] + 3.1661 * y[0] * y[0] * y[3] +
         19.84 * y[0] * y[0] * y[2];
}
double oracle_spring(const Point& x, bool squared) {
  return (x[2] + 2) * x[1] * (squared ? x[0] * x[0] : x[0]);
}
double oracle_welded(const Point& y, double sign) {
  return 1.10471 * y[0] * y[0] * y[1] + 0.04811 * y[2] * y[3] * (14 + sign * y[1]);
}

double oracle_ackley(const Point& x) {
  double a = 0, b = 0;
  for (double v : x) {
    a += v * v;
    b += std::cos(2 * M_PI * v);
  }
  double n = static_cast<double>(x.size());
  return -20 * std::exp(-0.2 * std::sqrt(a / n)) - std::exp(b / n) + 20 + M_E;
}

double oracle_schwefel12(const Point& x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double inner = 0;
    for (std::size_t j = 0; j <= i; ++j) inner += x[j];
    s += inner * inner;
  }
  return s;
}

}  // namespace

TEST_CASE("engineering objective corrections are discriminated", "[benchmarks]") {
  Point pv{0.8125, 0.4375, 42.0984, 176.6366};
  double corrected = bench::pressure_vessel_cost(pv);
  CHECK(corrected == Approx(oracle_pressure_vessel(pv, 0.6224)).epsilon(1e-14));
  CHECK(corrected >= 6050);
  CHECK(corrected <= 6070);
  CHECK(oracle_pressure_vessel(pv, 0.6624) > 6250);

  Point sp{0.0517, 0.357, 11.3};
  double s = bench::spring_weight(sp);
  CHECK(s == Approx(oracle_spring(sp, true)).epsilon(1e-14));
  CHECK(s == Approx(1.27e-2).epsilon(0.01));
  CHECK(oracle_spring(sp, false) == Approx(0.245).epsilon(0.01));

  Point wb{0.2057, 3.4705, 9.0366, 0.2057};
  double w = bench::welded_beam_cost(wb);
  CHECK(w == Approx(oracle_welded(wb, 1)).epsilon(1e-14));
  CHECK(w == Approx(1.72).epsilon(0.01));
  CHECK(oracle_welded(wb, -1) == Approx(1.11).epsilon(0.01));
}

TEST_CASE("engineering reference points are feasible", "[benchmarks]") {
  for (const char* name : {"pressure_vessel", "spring", "welded_beam"}) {
    BenchmarkEntry e = find_benchmark(name);
    ProblemSpec p = e.problem();
    REQUIRE(e.known_argmin);
    Evaluation ev = evaluate(p, *e.known_argmin);
    CHECK(ev.feasible);
    CHECK(ev.objective == e.known_best);
    CHECK(ev.violations.size() == p.constraints.size());
  }
  // The classic rounded welded-beam point sits just outside the shear limit.
  Evaluation rounded = evaluate(welded_beam(), Point{0.2057, 3.4705, 9.0366, 0.2057});
  CHECK_FALSE(rounded.feasible);
  CHECK(rounded.objective == Approx(1.7249).margin(1e-3));
}

TEST_CASE("welded beam response at a hand-checked point", "[benchmarks]") {
  Point y{1, 1, 1, 1};
  auto r = bench::welded_beam_response(y);
  const double P = 6000, L = 14, E = 30e6, G = 12e6;
  double tau1 = P / std::sqrt(2.0);
  double M = P * (L + 0.5);
  double R = std::sqrt(0.25 + 1);
  double J = 2 * std::sqrt(2.0) * (1.0 / 12 + 1);
  double tau2 = M * R / J;
  CHECK(r.tau == Approx(std::sqrt(tau1 * tau1 + tau1 * tau2 / R + tau2 * tau2)));
  CHECK(r.sigma == Approx(6 * P * L));
  CHECK(r.delta == Approx(4 * P * L * L * L / E));
  CHECK(r.buckling_load == Approx(4.013 * E / 6 / (L * L) * (1 - 1 / (2 * L) * std::sqrt(E / (4 * G)))));
}

TEST_CASE("registry entries attain their known optimum", "[benchmarks]") {
  CHECK(registry().size() == 25);
  for (const auto& e : registry()) {
    INFO(e.name);
    ProblemSpec p = e.problem();
    CHECK(p.dim() == e.dim);
    REQUIRE(e.known_argmin);
    CHECK(p.bounds.contains(*e.known_argmin));
    double f = p.objective(*e.known_argmin);
    CHECK(f == Approx(e.known_best).epsilon(1e-9).margin(1e-12));
  }
}

TEST_CASE("known optima are not beaten by random sampling", "[benchmarks][property]") {
  Rng rng(31);
  for (const auto& e : registry()) {
    if (e.engineering) continue;
    INFO(e.name);
    ProblemSpec p = e.problem();
    Point x(p.dim());
    for (int k = 0; k < 2000; ++k) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(p.bounds.lower[i], p.bounds.upper[i]);
      CHECK(p.objective(x) >= e.known_best - 1e-9);
    }
  }
}

TEST_CASE("objective values at fixed points", "[benchmarks]") {
  CHECK(bench::six_hump_camelback(Point{0.0898, -0.7126}) == Approx(-1.0316).margin(1e-4));
  CHECK(bench::six_hump_camelback(Point{-0.0898, 0.7126}) == Approx(-1.0316).margin(1e-4));
  CHECK(bench::hartman3(Point{0.114614, 0.555649, 0.852547}) == Approx(-3.86278).margin(1e-5));
  CHECK(bench::hartman6(Point{0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573}) ==
        Approx(-3.32237).margin(1e-5));
  CHECK(bench::booth(Point{1, 3}) == 0.0);
  CHECK(bench::booth(Point{0, 0}) == 74.0);
  CHECK(bench::rastrigin(Point{1, 0}) == Approx(1.0).margin(1e-12));
  CHECK(bench::sphere(Point{1, 2, 3}) == 14.0);
  CHECK(bench::sum_squares(Point{1, 1, 1}) == 6.0);
  CHECK(bench::step(Point{0.4, -0.6, 1.5}) == 0 + 1 + 4);
  CHECK(bench::schwefel_2_22(Point{-1, 2}) == 3 + 2);
  CHECK(bench::zakharov(Point{1, 1}) == Approx(2 + 2.25 + 5.0625));
  CHECK(bench::matyas(Point{1, 1}) == Approx(0.04));
  CHECK(bench::ackley(Point(30, 0.0)) == Approx(0.0).margin(1e-14));
  CHECK(bench::griewank(Point(30, 0.0)) == 0.0);
  CHECK(bench::foxholes(Point{-32, -32}) == Approx(0.998004).margin(1e-6));
  CHECK(bench::kowalik(Point{0.192833, 0.190836, 0.123117, 0.135766}) == Approx(3.0749e-4).margin(1e-7));
}

TEST_CASE("benchmarks agree with independent oracles at random points", "[benchmarks][property]") {
  Rng rng(41);
  for (int k = 0; k < 500; ++k) {
    Point x(1 + rng.index(40));
    for (double& v : x) v = rng.uniform(-30, 30);
    CHECK(bench::ackley(x) == Approx(oracle_ackley(x)).epsilon(1e-12).margin(1e-12));
    CHECK(bench::schwefel_1_2(x) == Approx(oracle_schwefel12(x)).epsilon(1e-12));
  }
}

TEST_CASE("benchmark lookup", "[benchmarks]") {
  CHECK(find_benchmark("sphere30").dim == 30);
  CHECK(find_benchmark("sphere5").dim == 5);
  CHECK(find_benchmark("rastrigin2").problem().bounds.upper[1] == 5.12);
  CHECK(find_benchmark("schwefel2_22_10").dim == 10);
  CHECK(find_benchmark("welded_beam").problem().constraints.size() == 7);
  CHECK(find_benchmark("spring").problem().constraints.size() == 4);
  CHECK(find_benchmark("pressure_vessel").problem().discrete_steps[0] == 0.0625);
  CHECK_THROWS_AS(find_benchmark("nope"), ConfigError);
  CHECK_THROWS_AS(find_benchmark("booth3"), ConfigError);
  CHECK_THROWS_AS(find_benchmark("sphere0"), ConfigError);
}

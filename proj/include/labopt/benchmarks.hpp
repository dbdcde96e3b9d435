#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "labopt/error.hpp"
#include "labopt/problem.hpp"

namespace labopt {

namespace bench {

using std::numbers::pi;
using X = std::span<const double>;

inline double sphere(X x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

inline double ackley(X x) {
  double n = static_cast<double>(x.size()), sq = 0, cs = 0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(2 * pi * v);
  }
  return -20 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20 + std::numbers::e;
}

inline double bohachevsky1(X x) {
  return x[0] * x[0] + 2 * x[1] * x[1] - 0.3 * std::cos(3 * pi * x[0]) - 0.4 * std::cos(4 * pi * x[1]) + 0.7;
}
inline double bohachevsky2(X x) {
  return x[0] * x[0] + 2 * x[1] * x[1] - 0.3 * std::cos(3 * pi * x[0]) * std::cos(4 * pi * x[1]) + 0.3;
}
inline double bohachevsky3(X x) {
  return x[0] * x[0] + 2 * x[1] * x[1] - 0.3 * std::cos(3 * pi * x[0] + 4 * pi * x[1]) + 0.3;
}

inline double booth(X x) {
  double a = x[0] + 2 * x[1] - 7, b = 2 * x[0] + x[1] - 5;
  return a * a + b * b;
}

inline double dixon_price(X x) {
  double s = (x[0] - 1) * (x[0] - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    double t = 2 * x[i] * x[i] - x[i - 1];
    s += static_cast<double>(i + 1) * t * t;
  }
  return s;
}

inline double griewank(X x) {
  double s = 0, p = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * x[i];
    p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return s / 4000 - p + 1;
}

inline constexpr std::array<double, 4> kHartmanC{1.0, 1.2, 3.0, 3.2};

template <std::size_t N>
double hartman(X x, const std::array<std::array<double, N>, 4>& a, const std::array<std::array<double, N>, 4>& p) {
  double s = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    double inner = 0;
    for (std::size_t j = 0; j < N; ++j) inner += a[i][j] * (x[j] - p[i][j]) * (x[j] - p[i][j]);
    s += kHartmanC[i] * std::exp(-inner);
  }
  return -s;
}

inline double hartman3(X x) {
  static constexpr std::array<std::array<double, 3>, 4> a{
      {{3, 10, 30}, {0.1, 10, 35}, {3, 10, 30}, {0.1, 10, 35}}};
  static constexpr std::array<std::array<double, 3>, 4> p{{{0.3689, 0.1170, 0.2673},
                                                          {0.4699, 0.4387, 0.7470},
                                                          {0.1091, 0.8732, 0.5547},
                                                          {0.03815, 0.5743, 0.8828}}};
  return hartman<3>(x, a, p);
}

inline double hartman6(X x) {
  static constexpr std::array<std::array<double, 6>, 4> a{{{10, 3, 17, 3.5, 1.7, 8},
                                                          {0.05, 10, 17, 0.1, 8, 14},
                                                          {3, 3.5, 1.7, 10, 17, 8},
                                                          {17, 8, 0.05, 10, 0.1, 14}}};
  static constexpr std::array<std::array<double, 6>, 4> p{{{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                                          {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                                          {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                                                          {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}}};
  return hartman<6>(x, a, p);
}

inline double foxholes(X x) {
  static constexpr std::array<double, 5> v{-32, -16, 0, 16, 32};
  double s = 1.0 / 500;
  for (std::size_t j = 0; j < 25; ++j) {
    double d0 = x[0] - v[j % 5], d1 = x[1] - v[j / 5];
    s += 1.0 / (static_cast<double>(j + 1) + std::pow(d0, 6) + std::pow(d1, 6));
  }
  return 1.0 / s;
}

inline double kowalik(X x) {
  static constexpr std::array<double, 11> a{0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
                                            0.0456, 0.0342, 0.0323, 0.0235, 0.0246};
  static constexpr std::array<double, 11> binv{0.25, 0.5, 1, 2, 4, 6, 8, 10, 12, 14, 16};
  double s = 0;
  for (std::size_t i = 0; i < 11; ++i) {
    double b = 1.0 / binv[i];
    double r = a[i] - x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]);
    s += r * r;
  }
  return s;
}

inline double matyas(X x) { return 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1]; }

// Deterministic form: no additive noise term.
inline double quartic(X x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(i + 1) * std::pow(x[i], 4);
  return s;
}

inline double rastrigin(X x) {
  double s = 0;
  for (double v : x) s += v * v - 10 * std::cos(2 * pi * v) + 10;
  return s;
}

inline double schaffer(X x) {
  double r2 = x[0] * x[0] + x[1] * x[1];
  double s = std::sin(std::sqrt(r2));
  double d = 1 + 0.001 * r2;
  return 0.5 + (s * s - 0.5) / (d * d);
}

inline double schwefel_1_2(X x) {
  double s = 0, prefix = 0;
  for (double v : x) {
    prefix += v;
    s += prefix * prefix;
  }
  return s;
}

inline double schwefel_2_22(X x) {
  double s = 0, p = 1;
  for (double v : x) {
    s += std::fabs(v);
    p *= std::fabs(v);
  }
  return s + p;
}

inline double six_hump_camelback(X x) {
  double a = x[0], b = x[1];
  return 4 * a * a - 2.1 * std::pow(a, 4) + std::pow(a, 6) / 3 + a * b - 4 * b * b + 4 * std::pow(b, 4);
}

inline double step(X x) {
  double s = 0;
  for (double v : x) {
    double f = std::floor(v + 0.5);
    s += f * f;
  }
  return s;
}

inline double sum_squares(X x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(i + 1) * x[i] * x[i];
  return s;
}

inline double zakharov(X x) {
  double s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s1 += x[i] * x[i];
    s2 += 0.5 * static_cast<double>(i + 1) * x[i];
  }
  return s1 + s2 * s2 + s2 * s2 * s2 * s2;
}

// ---- engineering design problems ------------------------------------------

inline double pressure_vessel_cost(X y) {
  return 0.6224 * y[0] * y[2] * y[3] + 1.7781 * y[1] * y[2] * y[2] + 3.1661 * y[0] * y[0] * y[3] +
         19.84 * y[0] * y[0] * y[2];
}

inline double spring_weight(X x) { return (x[2] + 2) * x[1] * x[0] * x[0]; }

inline double welded_beam_cost(X y) {
  return 1.10471 * y[0] * y[0] * y[1] + 0.04811 * y[2] * y[3] * (14 + y[1]);
}

struct WeldedBeamResponse {
  double tau, sigma, delta, buckling_load;
};

inline WeldedBeamResponse welded_beam_response(X y) {
  constexpr double P = 6000, L = 14, E = 30e6, Gmod = 12e6;
  const double tau1 = P / (std::sqrt(2.0) * y[0] * y[1]);
  const double M = P * (L + y[1] / 2);
  const double half = (y[0] + y[2]) / 2;
  const double R = std::sqrt(y[1] * y[1] / 4 + half * half);
  const double J = 2 * std::sqrt(2.0) * y[0] * y[1] * (y[1] * y[1] / 12 + half * half);
  const double tau2 = M * R / J;
  WeldedBeamResponse r;
  r.tau = std::sqrt(tau1 * tau1 + 2 * tau1 * tau2 * y[1] / (2 * R) + tau2 * tau2);
  r.sigma = 6 * P * L / (y[3] * y[2] * y[2]);
  r.delta = 4 * P * L * L * L / (E * std::pow(y[2], 3) * y[3]);
  r.buckling_load = 4.013 * E * std::sqrt(y[2] * y[2] * std::pow(y[3], 6) / 36) / (L * L) *
                    (1 - y[2] / (2 * L) * std::sqrt(E / (4 * Gmod)));
  return r;
}

}  // namespace bench

inline ProblemSpec pressure_vessel() {
  using bench::pi;
  ProblemSpec p;
  p.name = "pressure_vessel";
  p.bounds = Bounds({0.0625, 0.0625, 10, 1}, {99 * 0.0625, 99 * 0.0625, 200, 200});
  p.objective = bench::pressure_vessel_cost;
  p.constraints = {
      {"g1", [](bench::X y) { return -y[0] + 0.0193 * y[2]; }},
      {"g2", [](bench::X y) { return -y[1] + 0.00954 * y[2]; }},
      {"g3", [](bench::X y) { return -pi * y[2] * y[2] * y[3] - 4.0 / 3.0 * pi * std::pow(y[2], 3) + 1296000; }},
      {"g4", [](bench::X y) { return y[3] - 240; }},
  };
  p.discrete_steps = {0.0625, 0.0625, 0, 0};
  return p;
}

inline ProblemSpec spring() {
  ProblemSpec p;
  p.name = "spring";
  p.bounds = Bounds({0.05, 0.25, 2}, {2, 1.3, 15});
  p.objective = bench::spring_weight;
  p.constraints = {
      {"deflection", [](bench::X x) { return 1 - std::pow(x[1], 3) * x[2] / (71785 * std::pow(x[0], 4)); }},
      {"shear_stress",
       [](bench::X x) {
         return (4 * x[1] * x[1] - x[0] * x[1]) / (12566 * (x[1] * std::pow(x[0], 3) - std::pow(x[0], 4))) +
                1 / (5108 * x[0] * x[0]) - 1;
       }},
      {"surge_frequency", [](bench::X x) { return 1 - 140.45 * x[0] / (x[1] * x[1] * x[2]); }},
      {"outer_diameter", [](bench::X x) { return (x[0] + x[1]) / 1.5 - 1; }},
  };
  return p;
}

inline ProblemSpec welded_beam() {
  ProblemSpec p;
  p.name = "welded_beam";
  p.bounds = Bounds({0.1, 0.1, 0.1, 0.1}, {2, 10, 10, 2});
  p.objective = bench::welded_beam_cost;
  p.constraints = {
      {"shear_stress", [](bench::X y) { return bench::welded_beam_response(y).tau - 13600; }},
      {"bending_stress", [](bench::X y) { return bench::welded_beam_response(y).sigma - 30000; }},
      {"weld_thickness", [](bench::X y) { return y[0] - y[3]; }},
      {"cost", [](bench::X y) { return 0.10471 * y[0] * y[0] + 0.04811 * y[2] * y[3] * (14 + y[1]) - 5; }},
      {"min_weld", [](bench::X y) { return 0.125 - y[0]; }},
      {"deflection", [](bench::X y) { return bench::welded_beam_response(y).delta - 0.25; }},
      {"buckling", [](bench::X y) { return 6000 - bench::welded_beam_response(y).buckling_load; }},
  };
  return p;
}

struct BenchmarkEntry {
  std::string name;        // registry key, e.g. "sphere30"
  std::string title;       // human-readable
  std::size_t dim = 0;
  double lower = 0, upper = 0;  // same bounds in every dimension (unconstrained entries)
  bool separable = false;
  bool multimodal = false;
  double known_best = 0;
  std::optional<Point> known_argmin;
  Objective objective;
  bool parametric = false;  // dimension may be changed via the name suffix
  ProblemSpec (*engineering)() = nullptr;

  ProblemSpec problem() const {
    if (engineering) return engineering();
    ProblemSpec p;
    p.name = name;
    p.bounds = Bounds::uniform(dim, lower, upper);
    p.objective = objective;
    return p;
  }
};

namespace detail {

inline Point dixon_price_argmin(std::size_t n) {
  Point x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double k = std::ldexp(1.0, static_cast<int>(i + 1));
    x[i] = std::pow(2.0, -(k - 2) / k);
  }
  return x;
}

inline BenchmarkEntry entry(std::string base, std::string title, std::size_t dim, double lo, double hi,
                            bool sep, bool multi, double best, std::optional<Point> argmin, Objective f,
                            bool parametric) {
  BenchmarkEntry e;
  e.name = parametric ? base + std::to_string(dim) : base;
  e.title = std::move(title);
  e.dim = dim;
  e.lower = lo;
  e.upper = hi;
  e.separable = sep;
  e.multimodal = multi;
  e.known_best = best;
  e.known_argmin = std::move(argmin);
  e.objective = std::move(f);
  e.parametric = parametric;
  return e;
}

}  // namespace detail

/// Registry entry for a parametric function at dimension n (n >= 1).
inline std::optional<BenchmarkEntry> parametric_entry(const std::string& base, std::size_t n) {
  using detail::entry;
  Point zero(n, 0.0);
  if (base == "ackley") return entry(base, "Ackley", n, -32, 32, false, true, 0, zero, bench::ackley, true);
  if (base == "dixon_price")
    return entry(base, "Dixon-Price", n, -10, 10, false, false, 0, detail::dixon_price_argmin(n),
                 bench::dixon_price, true);
  if (base == "griewank") return entry(base, "Griewank", n, -600, 600, false, true, 0, zero, bench::griewank, true);
  if (base == "quartic") return entry(base, "Quartic", n, -1.28, 1.28, true, false, 0, zero, bench::quartic, true);
  if (base == "rastrigin")
    return entry(base, "Rastrigin", n, -5.12, 5.12, true, true, 0, zero, bench::rastrigin, true);
  if (base == "schwefel1_2_")
    return entry(base, "Schwefel 1.2", n, -100, 100, false, false, 0, zero, bench::schwefel_1_2, true);
  if (base == "schwefel2_22_")
    return entry(base, "Schwefel 2.22", n, -10, 10, false, false, 0, zero, bench::schwefel_2_22, true);
  if (base == "sphere") return entry(base, "Sphere", n, -100, 100, true, false, 0, zero, bench::sphere, true);
  if (base == "step") return entry(base, "Step", n, -100, 100, true, false, 0, zero, bench::step, true);
  if (base == "sumsquares")
    return entry(base, "SumSquares", n, -10, 10, true, false, 0, zero, bench::sum_squares, true);
  if (base == "zakharov") return entry(base, "Zakharov", n, -5, 10, false, false, 0, zero, bench::zakharov, true);
  return std::nullopt;
}

/// The built-in problems in registry order.
inline const std::vector<BenchmarkEntry>& registry() {
  static const std::vector<BenchmarkEntry> entries = [] {
    using detail::entry;
    std::vector<BenchmarkEntry> r;
    r.push_back(entry("foxholes", "Shekel's Foxholes", 2, -65.536, 65.536, true, true, 0.9980038377944498,
                      Point{-31.978334214983256, -31.97833392801104}, bench::foxholes, false));
    r.push_back(*parametric_entry("ackley", 30));
    r.push_back(entry("bohachevsky1", "Bohachevsky 1", 2, -100, 100, true, true, 0, Point{0, 0},
                      bench::bohachevsky1, false));
    r.push_back(entry("bohachevsky2", "Bohachevsky 2", 2, -100, 100, false, true, 0, Point{0, 0},
                      bench::bohachevsky2, false));
    r.push_back(entry("bohachevsky3", "Bohachevsky 3", 2, -100, 100, false, true, 0, Point{0, 0},
                      bench::bohachevsky3, false));
    r.push_back(entry("booth", "Booth", 2, -10, 10, true, true, 0, Point{1, 3}, bench::booth, false));
    r.push_back(*parametric_entry("dixon_price", 30));
    r.push_back(*parametric_entry("griewank", 30));
    r.push_back(entry("hartman3", "Hartman 3", 3, 0, 1, false, true, -3.8627821478207554,
                      Point{0.11461434203082951, 0.5556488507905384, 0.8525469538460251}, bench::hartman3,
                      false));
    r.push_back(entry("hartman6", "Hartman 6", 6, 0, 1, false, true, -3.322368011415515,
                      Point{0.20168951037794658, 0.15001069146456325, 0.4768739733706766,
                            0.2753324288543796, 0.3116516165632252, 0.6573005308464771},
                      bench::hartman6, false));
    r.push_back(entry("kowalik", "Kowalik", 4, -5, 5, false, true, 0.00030748598780560606,
                      Point{0.1928334531220072, 0.19083624744042324, 0.12311730138624344, 0.13576599305292816},
                      bench::kowalik, false));
    r.push_back(entry("matyas", "Matyas", 2, -10, 10, false, false, 0, Point{0, 0}, bench::matyas, false));
    r.push_back(*parametric_entry("quartic", 30));
    r.push_back(*parametric_entry("rastrigin", 30));
    r.push_back(entry("schaffer", "Schaffer", 2, -100, 100, false, true, 0, Point{0, 0}, bench::schaffer, false));
    r.push_back(*parametric_entry("schwefel1_2_", 30));
    r.push_back(*parametric_entry("schwefel2_22_", 30));
    r.push_back(entry("six_hump_camelback", "Six-hump camelback", 2, -5, 5, false, true, -1.0316284534898776,
                      Point{0.08984201652927098, -0.7126564013807202}, bench::six_hump_camelback, false));
    r.push_back(*parametric_entry("sphere", 30));
    r.push_back(*parametric_entry("step", 30));
    r.push_back(*parametric_entry("sumsquares", 30));
    r.push_back(*parametric_entry("zakharov", 10));

    auto eng = [](std::string name, std::string title, std::size_t dim, double best, Point argmin,
                  ProblemSpec (*make)()) {
      BenchmarkEntry e;
      e.name = std::move(name);
      e.title = std::move(title);
      e.dim = dim;
      e.multimodal = true;
      e.known_best = best;
      e.known_argmin = std::move(argmin);
      e.engineering = make;
      return e;
    };
    r.push_back(eng("pressure_vessel", "Pressure vessel design", 4, 6059.716670123209,
                    Point{0.8125, 0.4375, 42.098445, 176.6367}, pressure_vessel));
    r.push_back(eng("spring", "Tension/compression spring design", 3, 0.012665232788354576,
                    Point{0.05168905818764516, 0.3567176701500712, 11.288969834967453}, spring));
    r.push_back(eng("welded_beam", "Welded beam design", 4, 1.7248556738155942,
                    Point{0.205730, 3.470489, 9.036624, 0.205730}, welded_beam));
    return r;
  }();
  return entries;
}

/// Finds a registry entry by name. Parametric functions also accept any
/// dimension suffix, e.g. "sphere5" or "rastrigin2".
inline BenchmarkEntry find_benchmark(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  std::size_t cut = name.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1]))) --cut;
  if (cut < name.size() && cut > 0) {
    std::size_t n = std::stoul(name.substr(cut));
    if (n >= 1 && n <= 100000)
      if (auto e = parametric_entry(name.substr(0, cut), n)) return *e;
  }
  throw ConfigError("unknown problem '" + name + "' (see list-problems)");
}

}  // namespace labopt

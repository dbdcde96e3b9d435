#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "labopt/expr.hpp"
#include "labopt/rng.hpp"

using namespace labopt;
using Catch::Matchers::WithinAbs;

namespace {
double ev(const char* text, std::vector<double> x = {}, int n = 3) { return parse_expression(text, n).eval(x); }
}  // namespace

TEST_CASE("expression precedence and associativity", "[expr]") {
  CHECK(ev("2*3+4") == 10);
  CHECK(ev("2*(3+4)") == 14);
  CHECK(ev("2^3^2") == 512);   // right associative
  CHECK(ev("-2^2") == -4);     // power binds tighter than unary minus
  CHECK(ev("8/4/2") == 1);     // left associative
  CHECK(ev("10-4-3") == 3);
  CHECK(ev("2^-1") == 0.5);
  CHECK(ev("+3 - -2") == 5);
}

TEST_CASE("expression variables and functions", "[expr]") {
  CHECK(ev("x1^2 + x2^2 - 1", {0, 0}, 2) == -1);
  CHECK(ev("x1^2 + x2^2 - 1", {1, 0}, 2) == 0);
  CHECK_THAT(ev("(x1 - 2)^2 + x2^2 - 1.1", {2, 0}, 2), WithinAbs(-1.1, 1e-15));
  CHECK(ev("x1*x2", {3, 4}, 2) == 12);
  CHECK_THAT(ev("sin(pi/2) + cos(0) + sqrt(16) + abs(-3) + exp(0)"), WithinAbs(10.0, 1e-15));
  CHECK_THAT(ev("pi()"), WithinAbs(M_PI, 0));
  CHECK(ev("min(3, x1, 5)", {-1}, 1) == -1);
  CHECK(ev("max(3, x1, 5)", {9}, 1) == 9);
  CHECK(ev("1.5e2") == 150);
}

TEST_CASE("expression evaluation errors are reported", "[expr]") {
  CHECK_THROWS_AS(ev("sqrt(x1)", {-1}, 1), EvalError);
  CHECK_THROWS_AS(ev("1/x1", {0}, 1), EvalError);
  CHECK_THROWS_AS(ev("0^-1"), EvalError);
  CHECK_THROWS_AS(ev("(-8)^(1/3)"), EvalError);
  CHECK_THROWS_AS(ev("exp(1000)"), EvalError);
  CHECK_THROWS_AS(parse_expression("x2", 2).eval(std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("expression syntax errors carry byte offsets", "[expr]") {
  auto offset_of = [](const char* text, int n) -> std::size_t {
    try {
      parse_expression(text, n);
    } catch (const ParseError& e) {
      return e.offset();
    }
    FAIL("no parse error for " << text);
    return 0;
  };
  CHECK(offset_of("1 + * 2", 1) == 4);
  CHECK(offset_of("x3", 2) == 0);
  CHECK(offset_of("foo(1)", 1) == 0);
  CHECK(offset_of("(1 + 2", 1) == 6);
  CHECK(offset_of("1 2", 1) == 2);
  CHECK_THROWS_AS(parse_expression("", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("sin(1, 2)", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("x0", 1), ParseError);
}

TEST_CASE("constraints normalise to g <= 0", "[expr]") {
  std::vector<double> x{0.5, 2.0};
  CHECK(parse_constraint("x1 + x2 <= 3", 2).eval(x) == -0.5);
  CHECK(parse_constraint("x1 + x2 >= 3", 2).eval(x) == 0.5);
  CHECK(parse_constraint("x1 <= 0", 2).eval(x) == 0.5);
  CHECK(parse_constraint("0 >= x1", 2).eval(x) == 0.5);
  CHECK(parse_constraint("x1 - 1", 2).eval(x) == -0.5);
  CHECK(parse_constraint("min((x1-2)^2 + x2^2 - 1.1, (x1+2)^2 + x2^2 - 0.9) <= 0", 2).eval(std::vector<double>{1, 0}) ==
        Catch::Approx(-0.1));
  CHECK_THROWS_AS(parse_constraint("x1 < 1", 2), ParseError);
  CHECK_THROWS_AS(parse_constraint("x1 = 1", 2), ParseError);
  CHECK_THROWS_AS(parse_constraint("x1 <= x2 <= 1", 2), ParseError);
}

TEST_CASE("printing round-trips through the parser", "[expr][property]") {
  const char* samples[] = {"x1^2 + x2^2 - 1", "-(x1 - 2)^2 * 3 / x2", "min(x1, sin(x2), 2^-x1)",
                           "abs(x1) + sqrt(exp(x2)) - pi", "2^3^2 - -x1"};
  Rng rng(7);
  for (const char* s : samples) {
    Expr e = parse_expression(s, 2);
    Expr back = parse_expression(e.to_string(), 2);
    CHECK(e == back);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x{rng.uniform(0.1, 3), rng.uniform(0.1, 3)};
      CHECK(e.eval(x) == back.eval(x));
    }
  }
}

TEST_CASE("evaluation is pure", "[expr][property]") {
  Expr e = parse_expression("sin(x1) * x2 + x3^2", 3);
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(e.eval(x) == e.eval(x));
  }
}

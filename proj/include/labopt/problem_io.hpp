#pragma once

// Problem definitions from JSON documents, and name-or-path resolution.

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "labopt/benchmarks.hpp"
#include "labopt/error.hpp"
#include "labopt/expr.hpp"
#include "labopt/problem.hpp"

namespace labopt {

namespace detail {

inline Point read_bound(const nlohmann::json& j, const char* key, std::size_t dim) {
  const auto& v = j.at(key);
  if (v.is_number()) return Point(dim, v.get<double>());
  Point p = v.get<Point>();
  if (p.size() != dim)
    throw ConfigError(std::string("'") + key + "' has " + std::to_string(p.size()) + " entries, expected " +
                      std::to_string(dim));
  return p;
}

}  // namespace detail

/// Builds a problem from a document such as
///   {"name": "lens", "dim": 2, "lower": [-5, -2], "upper": [5, 2],
///    "objective": "x1^2 + x2^2", "constraints": ["x1^2 + x2^2 <= 1"],
///    "discrete": {"1": 0.0625}}
/// Bounds may be scalars (same value in every dimension). Discrete keys are
/// 1-based variable indices. Without an objective the problem minimises 0,
/// which is enough for search space reduction.
inline ProblemSpec problem_from_json(const nlohmann::json& j) {
  ProblemSpec p;
  try {
    p.name = j.value("name", std::string("unnamed"));
    const auto dim = j.at("dim").get<std::size_t>();
    if (dim == 0) throw ConfigError("'dim' must be >= 1");
    p.bounds = Bounds(detail::read_bound(j, "lower", dim), detail::read_bound(j, "upper", dim));
    const int n = static_cast<int>(dim);

    if (j.contains("objective")) {
      auto text = j.at("objective").get<std::string>();
      auto e = std::make_shared<const Expr>(parse_expression(text, n));
      p.objective = [e](std::span<const double> x) { return e->eval(x); };
    } else {
      p.objective = [](std::span<const double>) { return 0.0; };
    }
    if (j.value("sense", std::string("minimize")) == "maximize") {
      auto f = p.objective;
      p.objective = [f](std::span<const double> x) { return -f(x); };
    }

    if (j.contains("constraints")) {
      std::size_t k = 0;
      for (const auto& c : j.at("constraints")) {
        ++k;
        auto text = c.get<std::string>();
        try {
          p.constraints.push_back(ConstraintFn::from_expr("c" + std::to_string(k), parse_constraint(text, n)));
        } catch (const ParseError& e) {
          throw ConfigError("constraint " + std::to_string(k) + " ('" + text + "'): " + e.what());
        }
      }
    }

    if (j.contains("discrete")) {
      p.discrete_steps.assign(dim, 0.0);
      for (const auto& [key, step] : j.at("discrete").items()) {
        std::size_t idx = std::stoul(key);
        if (idx < 1 || idx > dim) throw ConfigError("discrete index " + key + " out of range");
        p.discrete_steps[idx - 1] = step.get<double>();
      }
    }
    if (j.contains("feasibility_tol")) p.feasibility_tol = j.at("feasibility_tol").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("problem file: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("problem file: discrete keys must be 1-based integers");
  }
  p.validate();
  return p;
}

inline ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("problem file '" + path + "': " + e.what(), e.byte);
  }
  return problem_from_json(j);
}

/// A registry name, or a path to a JSON problem file.
inline ProblemSpec resolve_problem(const std::string& name_or_path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(name_or_path, ec)) return load_problem_file(name_or_path);
  if (name_or_path.find('/') != std::string::npos || name_or_path.ends_with(".json"))
    throw Error("problem file '" + name_or_path + "' not found");
  return find_benchmark(name_or_path).problem();
}

}  // namespace labopt

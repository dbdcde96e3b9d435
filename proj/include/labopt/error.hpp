#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace labopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Division by zero, domain errors and non-finite results during evaluation.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Wrong vector length, out-of-bounds point, inconsistent configuration.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when a data-dependent stage cannot produce anything usable
/// (infeasible regions, oversized grids, all-noise clusterings).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

class InfeasibleRegion : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class GridTooLarge : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class EmptyFeasible : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class AllNoise : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

}  // namespace labopt

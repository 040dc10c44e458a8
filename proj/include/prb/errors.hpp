#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidEdgeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Dense oracle asked to factor a system larger than it is meant for.
class OracleSizeError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual, std::size_t iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Error raised inside an experiment, tagged with the round it happened in.
class RunError : public Error {
 public:
  RunError(const std::string& what, std::size_t round)
      : Error(what), round_(round) {}
  std::size_t round() const noexcept { return round_; }

 private:
  std::size_t round_;
};

}  // namespace prb

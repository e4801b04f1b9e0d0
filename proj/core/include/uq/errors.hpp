#pragma once

#include <stdexcept>
#include <string>

namespace uq {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// invalid input -> 2, convergence failure -> 3, numeric failure -> 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& msg) : Error(msg) {}
};

// Iterative solver hit its iteration cap before reaching tolerance.
// Carries the last residual; solvers that have a meaningful last iterate
// attach it through their own subclass.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, int iterations, double residual)
      : Error(msg), iterations(iterations), residual(residual) {}
  int iterations = 0;
  double residual = 0.0;
};

class ChainFailureError : public Error {
 public:
  explicit ChainFailureError(const std::string& msg) : Error(msg) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace uq

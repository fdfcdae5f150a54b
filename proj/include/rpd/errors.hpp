// errors.hpp: exception hierarchy shared by the riemann-pd library.
#pragma once

#include <stdexcept>
#include <string>

namespace rpd {

/// Base class for all library-specific failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument is outside the documented domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// An iterative routine exhausted its iteration budget before reaching the
/// requested tolerance.  `residual` carries the last residual seen so a caller
/// can decide whether the partial answer is still useful.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

/// A rejection sampler exceeded its proposal budget.
class SamplerBudgetError : public Error {
 public:
  explicit SamplerBudgetError(const std::string& what) : Error(what) {}
};

/// log_map was requested at (or numerically too close to) the cut locus,
/// where the inverse exponential is not single-valued.
class CutLocusError : public DomainError {
 public:
  explicit CutLocusError(const std::string& what) : DomainError(what) {}
};

/// A numeric quantity became non-finite during an iterative run.  The solver
/// attaches the step index at which the blow-up was detected.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, long long step)
      : Error(what), step(step) {}
  long long step;
};

/// Malformed input file (graph lists, bound-input JSON, ...).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace rpd

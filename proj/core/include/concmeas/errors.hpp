#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace concmeas {

/// Failure categories reported by the numerical routines.
enum class ErrorKind {
  Evaluation,          ///< a user evaluator failed or returned a non-finite value
  Domain,              ///< argument outside the documented domain
  NotRegularlyVarying, ///< regression on V(xt)/V(t) did not fit a power law
  BelowWellRange,      ///< energy too small for a positive turning point
  Geometry,            ///< transition widths could not be bracketed
  NonConvergence,      ///< quadrature or iteration budget exhausted
  AsymptoticRegime,    ///< J_K + J_W >= 1
  Resolution,          ///< grid too coarse for the requested operation
  MassDeficit,         ///< sampled density does not carry unit mass
  Precision,           ///< loss of orthogonality in a recurrence build
  Consistency,         ///< internal invariant violated
  Unsupported,         ///< request valid in principle but not implemented
};

const char* to_string(ErrorKind kind) noexcept;

/// Numerical failure. `value()` carries the offending argument or the
/// partial result when one is meaningful, NaN otherwise.
class NumericError : public std::runtime_error {
 public:
  NumericError(ErrorKind kind, const std::string& what,
               double value = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

/// Invalid user configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace concmeas

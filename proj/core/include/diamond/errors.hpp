#pragma once

#include <stdexcept>
#include <string>

namespace diamond {

// Malformed input: bad parameter values, level mismatches, out-of-range angles.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exact integer product does not fit the 64-bit range.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// A level was requested beyond the explicit prefix of a sequence without a regular tail.
class InsufficientDepth : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested quantity needs lim N_i e^{-J_i^2 t} < inf at this t and the probe says it does not hold.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A truncated series hit its term cap before reaching the tolerance.
class PrecisionFailure : public std::runtime_error {
 public:
  PrecisionFailure(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved_bound_(achieved_bound) {}
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

// An oracle (eigensolver, sampler) failed to produce a result.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diamond

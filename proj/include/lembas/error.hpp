#pragma once

#include <stdexcept>
#include <string>

namespace lembas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree (e.g. partial trace of a 5x5 matrix over (2,3)).
class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, long expected, long actual)
      : Error(what + ": expected dimension " + std::to_string(expected) + ", got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  long expected() const { return expected_; }
  long actual() const { return actual_; }

 private:
  long expected_;
  long actual_;
};

// An input violates a documented precondition (non-Hermitian generator,
// invalid density matrix, bad model parameter, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Time integration left its accuracy envelope or produced non-finite values.
class IntegratorError : public Error {
 public:
  IntegratorError(const std::string& what, double time)
      : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace lembas

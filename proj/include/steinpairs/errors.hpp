#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace steinpairs {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Raised when a declared smoothness class does not cover the requested order.
class SmoothnessError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a distribution spec fails a hard validation check.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be written or read; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations,
                   double achieved_error = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what + " (iterations=" + std::to_string(iterations) +
                           ", error estimate=" + std::to_string(achieved_error) + ")"),
        iterations_(iterations),
        achieved_error_(achieved_error) {}

  int iterations() const noexcept { return iterations_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  int iterations_;
  double achieved_error_;
};

}  // namespace steinpairs

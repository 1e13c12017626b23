#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: unknown or colliding labels, bad dimensions,
// parameters out of range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A matrix that fails the density-operator, unitary or channel checks.
class InvalidState : public Error {
 public:
  using Error::Error;
};

class DimensionBudgetExceeded : public Error {
 public:
  DimensionBudgetExceeded(std::size_t requested, std::size_t budget)
      : Error("dimension budget exceeded: product dimension " +
              std::to_string(requested) + " > " + std::to_string(budget)),
        requested_(requested),
        budget_(budget) {}

  std::size_t requested() const { return requested_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t requested_;
  std::size_t budget_;
};

}  // namespace qfc

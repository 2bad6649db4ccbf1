#pragma once

#include <stdexcept>
#include <string>

namespace hawking {

// Precondition failures (bad parameters) derive from std::invalid_argument,
// lookups outside a tabulated range from std::out_of_range. The two classes
// below cover the remaining failure kinds the CLI distinguishes.

/// Numerical procedure could not complete (step-size underflow, no root, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed result violates an asserted mathematical invariant.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(const std::string& what, std::string record)
      : std::runtime_error(what), record_(std::move(record)) {}
  const std::string& record() const noexcept { return record_; }

 private:
  std::string record_;
};

}  // namespace hawking

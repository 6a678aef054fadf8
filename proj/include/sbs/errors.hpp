#pragma once

#include <stdexcept>
#include <string>

namespace sbs {

// Assignment does not cover every job exactly once.
struct NotPartitionError : std::runtime_error {
  explicit NotPartitionError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Instance exceeds the oracle's enumeration limits.
struct TooLargeError : std::runtime_error {
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleInputError : std::runtime_error {
  explicit InfeasibleInputError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyInputError : std::runtime_error {
  explicit EmptyInputError(const std::string& what) : std::runtime_error(what) {}
};

// Greedy run-partition construction could not produce a feasible schedule.
// proven_infeasible is set when the failure certifies that no schedule exists
// at all (a family's job count cannot be split into runs inside its window).
struct ConstructionFailed : std::runtime_error {
  ConstructionFailed(const std::string& what, bool proven)
      : std::runtime_error(what), proven_infeasible(proven) {}
  bool proven_infeasible = false;
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sbs

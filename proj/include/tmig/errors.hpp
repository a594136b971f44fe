#pragma once

#include <stdexcept>
#include <string>

namespace tmig {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed scenario/flow-mod input.
struct ParseError : Error {
  using Error::Error;
};

/// A node id that is not part of the graph.
struct InvalidNodeError : Error {
  using Error::Error;
};

/// Scenario cannot be realized (e.g. generator never produced a connected graph).
struct InfeasibleError : Error {
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured budget.
struct BudgetExceededError : Error {
  using Error::Error;
};

/// Solver parameters out of range.
struct ParamError : Error {
  using Error::Error;
};

/// Route building was asked to run with an empty placement.
struct NoTranscoderError : Error {
  using Error::Error;
};

/// A migration trace without receptions from both transcoder MACs.
struct IncompleteMigrationError : Error {
  using Error::Error;
};

}  // namespace tmig

#pragma once

#include <stdexcept>
#include <string>

namespace binlab {

// Invalid user-supplied parameters (heuristic thresholds, distribution
// parameters, malformed spec strings). The CLI maps these to exit code 2.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A priority function produced a non-finite score.
class HeuristicEvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No feasible bin in the pool. Cannot happen when the pool holds one slot
// per item; raised as an internal invariant violation.
class HarnessExhaustedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed instance file or config file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace binlab

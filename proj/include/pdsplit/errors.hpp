#pragma once

#include <stdexcept>
#include <string>

namespace pdsplit {

// Invalid argument values (bad dimensions, nonpositive steps, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Inconsistent solver configuration (wrong params type for an algorithm,
// missing certificate, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File I/O and format failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step-size / strong-monotonicity conditions violated.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pdsplit

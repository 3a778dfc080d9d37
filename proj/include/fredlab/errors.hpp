#pragma once

#include <stdexcept>
#include <string>

namespace fredlab {

// Invalid or inconsistent user-supplied configuration / malformed inputs.
// CLI maps this to exit code 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical refusal: the computation cannot certify its answer (no admissible
// spectral gap, invalid intertwiner, ...).  CLI maps this to exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AmbiguousKernelError : NumericalError {
  using NumericalError::NumericalError;
};

struct IntertwinerError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace fredlab

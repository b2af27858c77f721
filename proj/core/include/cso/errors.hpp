#pragma once

#include <stdexcept>
#include <string>

namespace cso {

// Raised when a request would push a single point past the per-point sample cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear algebra broke down (singular Hessian, lost feasibility, ...).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver could not produce an answer at all.
class SolverFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cso

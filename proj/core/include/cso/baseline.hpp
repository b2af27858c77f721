#pragma once

#include <cstdint>

#include "cso/oracle.hpp"

namespace cso::bench {

struct BaselineOptions {
  double constant = 1.0;    // K = ceil(constant * d N^2 L^2 / eps^2 * ln(1 / delta))
  bool early_stop = false;  // stop when the running mean stalls for a window of iterations
  double window_factor = 300.0;  // window = ceil(window_factor * d / eps^2 * ln(1 / delta))
};

struct BaselineTrace {
  std::int64_t planned_iterations = 0;
  std::int64_t iterations = 0;
  bool early_stopped = false;
};

std::int64_t baseline_iterations(int d, double n, double lipschitz, double epsilon, double delta,
                                 double constant = 1.0);

/// Projected stochastic subgradient descent on the Lovasz extension from the box center,
/// one draw per chain point per step, step N / (L sqrt(K)). The average of the last half
/// of the iterates is rounded to a grid point.
GridPoint subgradient_baseline(Sampler& sampler, const Guarantee& guarantee, double lipschitz,
                               const BaselineOptions& options = {}, BaselineTrace* trace = nullptr);

}  // namespace cso::bench

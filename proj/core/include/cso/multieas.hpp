#pragma once

#include <cstdint>
#include <vector>

#include "cso/onedim.hpp"
#include "cso/oracle.hpp"

namespace cso::multieas {

struct RecursiveResult {
  GridPoint witness;
  double estimate = 0.0;  // estimate of the optimal value
};

struct OuterTrace {
  std::vector<onedim::ActiveSet> sets;
  std::vector<onedim::EasOp> ops;
  std::vector<double> widths;          // tier width in force at each operation
  std::vector<std::int64_t> tier_sizes;  // active-set size recorded at each refresh
  int marginal_calls = 0;
};

/// Mean at x with half-width <= epsilon / 4 at level 1 - delta / 4. Reuses draws in `book`.
double value_certificate(Sampler& sampler, SampleBook& book, PointView x, double epsilon, double delta);

/// Estimate of min_y f(y, x_last) within h w.p. 1 - delta_prime, and its witness y.
RecursiveResult marginal_estimate(Sampler& sampler, std::int64_t x_last, double h, double delta_prime);

/// Recursive enhanced adaptive sampling over the trailing coordinate. The returned
/// witness is epsilon-optimal and the estimate is within epsilon of the optimum, each
/// with probability 1 - delta.
RecursiveResult solve_recursive(Sampler& sampler, const Guarantee& guarantee, OuterTrace* trace = nullptr);

}  // namespace cso::multieas

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cso/oracle.hpp"
#include "cso/rng.hpp"

namespace cso::bench {

/// sqrt(y*/y) - 1 left of the optimum, sqrt((N+1-y*)/(N+1-y)) - 1 right of it.
double separable_g(std::int64_t y_star, std::int64_t y, std::int64_t n);

/// f(x) = sum_i c_i g(x*_i; x_i) on [N]^d.
struct SeparableModel {
  int d = 1;
  std::int64_t n = 1;
  std::vector<double> weights;
  GridPoint optimum;
  double noise_sigma = 1.0;

  /// c_i ~ U[0.75, 1.25], x*_i ~ U{1, ..., max(1, floor(0.3 N))}.
  static SeparableModel random(int d, std::int64_t n, Rng& rng, double noise_sigma = 1.0);

  double value(PointView x) const;
  /// Largest change of f along one unit coordinate step, summed over coordinates.
  double lipschitz() const;
  std::vector<std::int64_t> dims() const { return std::vector<std::int64_t>(d, n); }
  GaussianNoiseOracle oracle() const;
};

struct GridMinimum {
  GridPoint point;
  double value = 0.0;
};

inline constexpr std::int64_t kBruteForceLimit = 10'000'000;

/// Exhaustive scan in lexicographic order; ties keep the first point. Needs prod dims <= 1e7.
GridMinimum brute_force_min(const std::function<double(PointView)>& f, std::span<const std::int64_t> dims);

}  // namespace cso::bench

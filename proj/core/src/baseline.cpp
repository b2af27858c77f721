#include "cso/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "cso/lovasz.hpp"

namespace cso::bench {

std::int64_t baseline_iterations(int d, double n, double lipschitz, double epsilon, double delta, double constant) {
  if (d < 1 || !(n >= 1.0) || !(lipschitz >= 0.0) || !(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("baseline_iterations: bad parameters");
  }
  const double raw =
      std::ceil(constant * d * n * n * lipschitz * lipschitz / (epsilon * epsilon) * std::log(1.0 / delta));
  return static_cast<std::int64_t>(std::clamp(raw, 1.0, 1e15));
}

GridPoint subgradient_baseline(Sampler& sampler, const Guarantee& guarantee, double lipschitz,
                               const BaselineOptions& options, BaselineTrace* trace) {
  guarantee.validate();
  if (guarantee.is_iz()) throw std::invalid_argument("subgradient_baseline: PGS only");
  const auto& dims = sampler.oracle().dims();
  const int d = static_cast<int>(dims.size());
  const double n = static_cast<double>(*std::max_element(dims.begin(), dims.end()));
  const double eps = guarantee.epsilon;

  Eigen::VectorXd lo(d), hi(d), x(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = 1.0;
    hi[i] = static_cast<double>(dims[i]);
    x[i] = (lo[i] + hi[i]) / 2.0;
  }
  const auto k_max = baseline_iterations(d, n, lipschitz, eps, guarantee.delta, options.constant);
  if (trace) trace->planned_iterations = k_max;

  // Sums over the dyadic blocks [2^j, 2^{j+1}); the average uses the last two blocks,
  // which cover at least the final half of the iterates.
  Eigen::VectorXd block = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd prev_block = Eigen::VectorXd::Zero(d);
  std::int64_t block_start = 1;
  std::int64_t prev_start = 1;
  std::int64_t k = 0;
  if (lipschitz > 0.0) {
    const double step = n / (lipschitz * std::sqrt(static_cast<double>(k_max)));
    const auto window = static_cast<std::int64_t>(std::ceil(options.window_factor * d / (eps * eps) * std::log(1.0 / guarantee.delta)));
    const double required_drop = eps / std::sqrt(n);
    double running_sum = 0.0;
    double checkpoint_mean = std::numeric_limits<double>::infinity();
    std::int64_t checkpoint_k = 0;
    for (k = 1; k <= k_max; ++k) {
      const auto est = lovasz::stochastic_subgradient(sampler, x, 1);
      x = (x - step * est.gradient).cwiseMax(lo).cwiseMin(hi);
      if (k == 2 * block_start) {
        prev_block = block;
        prev_start = block_start;
        block.setZero();
        block_start = k;
      }
      block += x;
      running_sum += est.value;
      if (options.early_stop && k - checkpoint_k >= window) {
        const double mean = running_sum / static_cast<double>(k);
        if (mean > checkpoint_mean - required_drop) {
          if (trace) trace->early_stopped = true;
          break;
        }
        checkpoint_mean = mean;
        checkpoint_k = k;
      }
    }
    k = std::min(k, k_max);
  }
  if (trace) trace->iterations = k;

  Eigen::VectorXd average = x;
  if (k > 0) average = (block + prev_block) / static_cast<double>(k - prev_start + 1);
  return lovasz::round_to_integer(sampler, average, guarantee);
}

}  // namespace cso::bench

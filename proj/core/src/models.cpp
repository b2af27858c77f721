#include "cso/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cso::bench {

double separable_g(std::int64_t y_star, std::int64_t y, std::int64_t n) {
  if (n < 1 || y < 1 || y > n || y_star < 1 || y_star > n) {
    throw std::invalid_argument("separable_g: arguments outside [1, N]");
  }
  if (y <= y_star) return std::sqrt(static_cast<double>(y_star) / static_cast<double>(y)) - 1.0;
  return std::sqrt(static_cast<double>(n + 1 - y_star) / static_cast<double>(n + 1 - y)) - 1.0;
}

SeparableModel SeparableModel::random(int d, std::int64_t n, Rng& rng, double noise_sigma) {
  if (d < 1 || n < 1) throw std::invalid_argument("SeparableModel: need d >= 1 and N >= 1");
  SeparableModel m;
  m.d = d;
  m.n = n;
  m.noise_sigma = noise_sigma;
  const auto top = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(0.3 * static_cast<double>(n))));
  std::uniform_real_distribution<double> weight(0.75, 1.25);
  std::uniform_int_distribution<std::int64_t> spot(1, top);
  for (int i = 0; i < d; ++i) {
    m.weights.push_back(weight(rng));
    m.optimum.push_back(spot(rng));
  }
  return m;
}

double SeparableModel::value(PointView x) const {
  double total = 0.0;
  for (int i = 0; i < d; ++i) total += weights[i] * separable_g(optimum[i], x[i], n);
  return total;
}

double SeparableModel::lipschitz() const {
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    double step = 0.0;
    for (std::int64_t y = 1; y < n; ++y) {
      step = std::max(step, std::abs(separable_g(optimum[i], y + 1, n) - separable_g(optimum[i], y, n)));
    }
    total += weights[i] * step;
  }
  return total;
}

GaussianNoiseOracle SeparableModel::oracle() const {
  return GaussianNoiseOracle(dims(), [m = *this](PointView x) { return m.value(x); }, noise_sigma);
}

GridMinimum brute_force_min(const std::function<double(PointView)>& f, std::span<const std::int64_t> dims) {
  if (dims.empty()) throw std::invalid_argument("brute_force_min: empty domain");
  std::int64_t total = 1;
  for (auto n : dims) {
    if (n < 1) throw std::invalid_argument("brute_force_min: dimension size below 1");
    if (total > kBruteForceLimit / n) throw std::invalid_argument("brute_force_min: more than 1e7 points");
    total *= n;
  }
  GridPoint x(dims.size(), 1);
  GridMinimum best{x, f(x)};
  for (std::int64_t k = 1; k < total; ++k) {
    // odometer with the last coordinate fastest, so the scan is lexicographic
    for (std::size_t i = dims.size(); i-- > 0;) {
      if (++x[i] <= dims[i]) break;
      x[i] = 1;
    }
    const double v = f(x);
    if (v < best.value) best = {x, v};
  }
  return best;
}

}  // namespace cso::bench

#include "cso/lovasz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cso::lovasz {

std::vector<int> consistent_permutation(const Eigen::VectorXd& frac) {
  std::vector<int> order(static_cast<std::size_t>(frac.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  return order;
}

Chain neighbor_chain(const Eigen::VectorXd& x, std::span<const std::int64_t> dims) {
  const auto d = static_cast<int>(dims.size());
  if (x.size() != d) throw std::invalid_argument("neighbor_chain: dimension mismatch");
  Chain c;
  c.base.resize(static_cast<std::size_t>(d));
  c.frac.resize(d);
  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(x[i])) throw std::invalid_argument("neighbor_chain: non-finite coordinate");
    const auto n = static_cast<double>(dims[static_cast<std::size_t>(i)]);
    const double xi = std::clamp(x[i], 1.0, n);
    if (n < 2.0) {
      c.base[static_cast<std::size_t>(i)] = 1;
      c.frac[i] = 0.0;
      continue;
    }
    const double b = std::min(std::floor(xi), n - 1.0);
    c.base[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(b);
    c.frac[i] = xi - b;
  }
  c.order = consistent_permutation(c.frac);
  c.points.reserve(static_cast<std::size_t>(d) + 1);
  c.points.push_back(c.base);
  for (int i = 0; i < d; ++i) {
    GridPoint next = c.points.back();
    const auto k = static_cast<std::size_t>(c.order[static_cast<std::size_t>(i)]);
    if (dims[k] >= 2) ++next[k];
    c.points.push_back(std::move(next));
  }
  return c;
}

double lovasz_value(const Chain& chain, std::span<const double> v) {
  if (v.size() != chain.points.size()) throw std::invalid_argument("lovasz_value: one value per chain point");
  // Convex-combination form: weights are 0 or 1 at grid points, so those values come back exactly.
  const std::size_t d = chain.order.size();
  auto f = [&](std::size_t i) { return chain.frac[chain.order[i]]; };
  if (d == 0) return v[0];
  double total = (1.0 - f(0)) * v[0];
  for (std::size_t i = 1; i < d; ++i) total += (f(i - 1) - f(i)) * v[i];
  return total + f(d - 1) * v[d];
}

Eigen::VectorXd lovasz_subgradient(const Chain& chain, std::span<const double> v) {
  if (v.size() != chain.points.size()) throw std::invalid_argument("lovasz_subgradient: one value per chain point");
  Eigen::VectorXd g(static_cast<Eigen::Index>(chain.order.size()));
  for (std::size_t i = 1; i < v.size(); ++i) g[chain.order[i - 1]] = v[i] - v[i - 1];
  return g;
}

double lovasz_extension(const Eigen::VectorXd& x, std::span<const std::int64_t> dims,
                        const std::function<double(PointView)>& f) {
  const auto c = neighbor_chain(x, dims);
  std::vector<double> v;
  v.reserve(c.points.size());
  for (const auto& p : c.points) v.push_back(f(p));
  return lovasz_value(c, v);
}

SubgradientEstimate stochastic_subgradient(Sampler& sampler, const Eigen::VectorXd& x, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("stochastic_subgradient: n must be positive");
  SubgradientEstimate est;
  est.chain = neighbor_chain(x, sampler.oracle().dims());
  const auto& pts = est.chain.points;
  est.stats.resize(pts.size());
  std::vector<double> means(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && pts[i] == pts[i - 1]) {
      est.stats[i] = est.stats[i - 1];
    } else {
      sampler.draw(pts[i], n, est.stats[i]);
    }
    means[i] = est.stats[i].mean();
  }
  est.gradient = lovasz_subgradient(est.chain, means);
  est.value = lovasz_value(est.chain, means);
  return est;
}

std::uint64_t so_sample_count(int d, double n, double sigma, double epsilon, double delta) {
  if (d < 1 || !(n >= 1.0)) throw std::invalid_argument("so_sample_count: bad dimension or size");
  if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("so_sample_count: bad epsilon or delta");
  }
  const long double s = sigma;
  const long double e = epsilon;
  const long double nn = n;
  const auto raw = static_cast<double>(
      std::ceil(4.0L * d * nn * nn * s * s / (e * e) * std::log(2.0L / static_cast<long double>(delta))));
  if (raw >= 1e18) return static_cast<std::uint64_t>(1e18);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw));
}

GridPoint round_to_integer(Sampler& sampler, const Eigen::VectorXd& xbar, const Guarantee& guarantee,
                           SampleBook* book) {
  guarantee.validate();
  const double eps = guarantee.is_iz() ? *guarantee.iz_gap / 2.0 : guarantee.epsilon;
  const double alpha = guarantee.delta / 4.0;
  const auto chain = neighbor_chain(xbar, sampler.oracle().dims());
  SampleBook local(alpha);
  SampleBook& store = book ? *book : local;

  GridPoint best;
  double best_mean = std::numeric_limits<double>::infinity();
  for (const auto& p : chain.points) {
    auto& kept = store.at(p);
    SampleStats s = kept;
    s.alpha = alpha;
    sample_to_width(sampler, p, eps / 4.0, s);
    kept.count = s.count;
    kept.sum = s.sum;
    if (s.mean() < best_mean) {
      best_mean = s.mean();
      best = p;
    }
  }
  return best;
}

}  // namespace cso::lovasz

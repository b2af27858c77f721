#include "cso/multieas.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace cso::multieas {

double value_certificate(Sampler& sampler, SampleBook& book, PointView x, double epsilon, double delta) {
  if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("value_certificate: bad precision");
  if (!sampler.oracle().contains(x)) throw std::invalid_argument("value_certificate: point outside the grid");
  auto& kept = book.at(x);
  SampleStats s = kept;
  s.alpha = delta / 4.0;
  sample_to_width(sampler, x, epsilon / 4.0, s);
  kept.count = s.count;
  kept.sum = s.sum;
  return s.mean();
}

RecursiveResult marginal_estimate(Sampler& sampler, std::int64_t x_last, double h, double delta_prime) {
  const auto& dims = sampler.oracle().dims();
  if (dims.empty()) throw std::invalid_argument("marginal_estimate: zero-dimensional oracle");
  if (x_last < 1 || x_last > dims.back()) throw std::invalid_argument("marginal_estimate: coordinate outside the grid");
  if (dims.size() == 1) {
    SampleStats s;
    s.alpha = delta_prime;
    const std::int64_t x[1] = {x_last};
    sample_to_width(sampler, x, h, s);
    return {GridPoint{x_last}, s.mean()};
  }
  auto slice = AffineRestrictionOracle::fix_last(sampler.oracle(), x_last);
  Sampler inner = sampler.rebind(slice);
  auto res = solve_recursive(inner, Guarantee::pgs(h, delta_prime));
  GridPoint full = res.witness;
  full.push_back(x_last);
  return {std::move(full), res.estimate};
}

RecursiveResult solve_recursive(Sampler& sampler, const Guarantee& guarantee, OuterTrace* trace) {
  guarantee.validate();
  if (guarantee.is_iz()) throw std::invalid_argument("solve_recursive runs in PGS mode");
  const auto& dims = sampler.oracle().dims();
  if (dims.empty()) throw std::invalid_argument("solve_recursive: zero-dimensional oracle");
  const double eps = guarantee.epsilon;
  const double delta = guarantee.delta;
  SampleBook book(delta / 4.0);

  if (dims.size() == 1) {
    const auto x = onedim::enhanced_adaptive_sampling(sampler, Guarantee::pgs(eps / 2.0, delta / 2.0));
    const GridPoint w{x};
    return {w, value_certificate(sampler, book, w, eps, delta)};
  }

  // Outer structure at eps / 2 so that the assembled witness stays eps-optimal.
  const double outer_eps = eps / 2.0;
  const std::int64_t n = dims.back();
  const double level = (delta / 2.0) / (2.0 * static_cast<double>(n));

  onedim::ActiveSet s{1, 1, n};
  if (trace) trace->sets.push_back(s);
  std::int64_t tier_size = std::numeric_limits<std::int64_t>::max();
  double h = 0.0;
  std::map<std::int64_t, RecursiveResult> tier;  // estimates at the current width

  auto estimate = [&](std::int64_t x) -> const RecursiveResult& {
    auto it = tier.find(x);
    if (it == tier.end()) {
      if (trace) ++trace->marginal_calls;
      it = tier.emplace(x, marginal_estimate(sampler, x, h, level)).first;
    }
    return it->second;
  };

  while (s.size >= 3) {
    if (s.size <= tier_size / 2) {
      tier_size = s.size;
      h = static_cast<double>(tier_size) * outer_eps / 160.0;
      tier.clear();
      if (trace) trace->tier_sizes.push_back(tier_size);
    }
    std::int64_t best_j = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> est(static_cast<std::size_t>(s.size));
    for (std::int64_t j = 0; j < s.size; ++j) {
      est[static_cast<std::size_t>(j)] = estimate(s.at(j)).estimate;
      if (est[static_cast<std::size_t>(j)] < best) {
        best = est[static_cast<std::size_t>(j)];
        best_j = j;
      }
    }
    std::int64_t cut_above = -1;
    std::int64_t cut_below = -1;
    for (std::int64_t j = best_j + 1; j < s.size && cut_above < 0; ++j) {
      if (best + h <= est[static_cast<std::size_t>(j)] - h) cut_above = j;
    }
    for (std::int64_t j = best_j - 1; j >= 0 && cut_below < 0; --j) {
      if (best + h <= est[static_cast<std::size_t>(j)] - h) cut_below = j;
    }
    onedim::EasOp op;
    if (cut_above >= 0 || cut_below >= 0) {
      if (cut_above >= 0) s.size = cut_above;
      if (cut_below >= 0) {
        s.lo = s.at(cut_below + 1);
        s.size -= cut_below + 1;
      }
      op = onedim::EasOp::kTypeOne;
    } else {
      s.stride *= 2;
      s.size = (s.size + 1) / 2;
      op = onedim::EasOp::kTypeTwo;
    }
    if (trace) {
      trace->ops.push_back(op);
      trace->sets.push_back(s);
      trace->widths.push_back(h);
    }
  }

  h = outer_eps / 4.0;
  tier.clear();
  double best = std::numeric_limits<double>::infinity();
  GridPoint witness;
  for (auto x : s.points()) {
    const auto& r = estimate(x);
    if (r.estimate < best) {
      best = r.estimate;
      witness = r.witness;
    }
  }
  return {witness, value_certificate(sampler, book, witness, eps, delta)};
}

}  // namespace cso::multieas

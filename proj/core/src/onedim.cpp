#include "cso/onedim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cso::onedim {

namespace {

std::int64_t domain_size(const Sampler& sampler) {
  const auto& dims = sampler.oracle().dims();
  if (dims.size() != 1) throw std::invalid_argument("one-dimensional solver needs a 1-d oracle");
  return dims[0];
}

// floor(a / 3) and ceil(a / 3) for possibly negative a.
std::int64_t floor_div3(std::int64_t a) { return a >= 0 ? a / 3 : -((-a + 2) / 3); }
std::int64_t ceil_div3(std::int64_t a) { return a >= 0 ? (a + 2) / 3 : -((-a) / 3); }

}  // namespace

Trisection trisection(std::int64_t lo, std::int64_t hi) {
  if (hi - lo <= 2) throw std::invalid_argument("trisection needs hi - lo > 2");
  return {floor_div3(2 * lo + hi), ceil_div3(lo + 2 * hi)};
}

std::int64_t finalist_subproblem(Sampler& sampler, SampleBook& book, std::span<const std::int64_t> points,
                                 double width) {
  if (points.empty()) throw std::invalid_argument("finalist_subproblem: no points");
  std::int64_t best = points[0];
  double best_mean = std::numeric_limits<double>::infinity();
  for (auto p : points) {
    const std::int64_t x[1] = {p};
    auto& s = book.at(x);
    sample_to_width(sampler, x, width, s);
    if (s.mean() < best_mean || (s.mean() == best_mean && p < best)) {
      best_mean = s.mean();
      best = p;
    }
  }
  return best;
}

std::int64_t adaptive_sampling(Sampler& sampler, const Guarantee& guarantee, AsTrace* trace) {
  guarantee.validate();
  const std::int64_t n = domain_size(sampler);
  if (n == 1) return 1;

  const double t_max = std::log(static_cast<double>(n)) / std::log(1.5) + 2.0;
  SampleBook book(guarantee.delta / (2.0 * t_max));
  const double sigma = sampler.sigma();

  std::int64_t lo = 1;
  std::int64_t hi = n;
  while (hi - lo > 2) {
    const auto [a, b] = trisection(lo, hi);
    const double stop_width = guarantee.is_iz() ? static_cast<double>(b - a) * *guarantee.iz_gap / 5.0
                                                : guarantee.epsilon / 8.0;
    const std::int64_t xa[1] = {a};
    const std::int64_t xb[1] = {b};
    auto& sa = book.at(xa);
    auto& sb = book.at(xb);
    AsUpdate update;
    for (;;) {
      if (sa.count > 0 && sb.count > 0) {
        const auto order = compare_ci(sa.interval(sigma), sb.interval(sigma));
        if (order == CiOrder::kBBelow) {
          update = AsUpdate::kRaiseLower;
          break;
        }
        if (order == CiOrder::kABelow) {
          update = AsUpdate::kDropUpper;
          break;
        }
      }
      const bool grew_a = sample_batch_toward(sampler, xa, stop_width, sa);
      const bool grew_b = sample_batch_toward(sampler, xb, stop_width, sb);
      if (!grew_a && !grew_b) {
        update = AsUpdate::kShrinkBoth;
        break;
      }
    }
    if (update != AsUpdate::kDropUpper) lo = a;
    if (update != AsUpdate::kRaiseLower) hi = b;
    if (trace) {
      trace->updates.push_back(update);
      trace->intervals.emplace_back(lo, hi);
    }
  }

  std::vector<std::int64_t> finalists;
  for (auto x = lo; x <= hi; ++x) finalists.push_back(x);
  const double width = guarantee.is_iz() ? *guarantee.iz_gap / 3.0 : guarantee.epsilon / 2.0;
  return finalist_subproblem(sampler, book, finalists, width);
}

std::vector<std::int64_t> ActiveSet::points() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(size));
  for (std::int64_t j = 0; j < size; ++j) out.push_back(at(j));
  return out;
}

std::int64_t enhanced_adaptive_sampling(Sampler& sampler, const Guarantee& guarantee, EasTrace* trace) {
  guarantee.validate();
  if (guarantee.is_iz()) throw std::invalid_argument("enhanced_adaptive_sampling runs in PGS mode only");
  const std::int64_t n = domain_size(sampler);
  const double eps = guarantee.epsilon;
  const double sigma = sampler.sigma();
  SampleBook book(guarantee.delta / (2.0 * static_cast<double>(n)));

  ActiveSet s{1, 1, n};
  if (trace) trace->sets.push_back(s);

  // Width tier: refreshed to size * eps / 160 whenever the active set has halved.
  std::int64_t tier_size = std::numeric_limits<std::int64_t>::max();
  double tier_width = 0.0;

  while (s.size >= 3) {
    if (s.size <= tier_size / 2) {
      tier_size = s.size;
      tier_width = static_cast<double>(tier_size) * eps / 160.0;
    }

    bool sampled = false;
    for (std::int64_t j = 0; j < s.size; ++j) {
      const std::int64_t x[1] = {s.at(j)};
      sampled |= sample_batch_toward(sampler, x, tier_width, book.at(x));
    }

    // The point with the lowest upper bound separates from some y iff any pair separates.
    std::int64_t best_j = 0;
    double best_upper = std::numeric_limits<double>::infinity();
    std::vector<double> lower(static_cast<std::size_t>(s.size));
    for (std::int64_t j = 0; j < s.size; ++j) {
      const std::int64_t x[1] = {s.at(j)};
      const auto ci = book.at(x).interval(sigma);
      lower[static_cast<std::size_t>(j)] = ci.lower();
      if (ci.upper() < best_upper) {
        best_upper = ci.upper();
        best_j = j;
      }
    }
    std::int64_t cut_above = -1;
    std::int64_t cut_below = -1;
    for (std::int64_t j = best_j + 1; j < s.size; ++j) {
      if (best_upper <= lower[static_cast<std::size_t>(j)]) {
        cut_above = j;
        break;
      }
    }
    for (std::int64_t j = best_j - 1; j >= 0; --j) {
      if (best_upper <= lower[static_cast<std::size_t>(j)]) {
        cut_below = j;
        break;
      }
    }

    if (cut_above >= 0 || cut_below >= 0) {
      if (cut_above >= 0) s.size = cut_above;
      if (cut_below >= 0) {
        s.lo = s.at(cut_below + 1);
        s.size -= cut_below + 1;
      }
      if (trace) {
        trace->ops.push_back(EasOp::kTypeOne);
        trace->sets.push_back(s);
      }
    } else if (!sampled) {
      s.stride *= 2;
      s.size = (s.size + 1) / 2;
      if (trace) {
        trace->ops.push_back(EasOp::kTypeTwo);
        trace->sets.push_back(s);
      }
    }
  }

  const auto finalists = s.points();
  return finalist_subproblem(sampler, book, finalists, eps / 4.0);
}

}  // namespace cso::onedim

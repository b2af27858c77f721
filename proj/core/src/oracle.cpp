#include "cso/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cso/errors.hpp"

namespace cso {

double StochasticOracle::sample_sum(PointView x, std::uint64_t n, Rng& rng) const {
  double total = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) total += sample(x, rng);
  return total;
}

bool StochasticOracle::contains(PointView x) const {
  const auto& n = dims();
  if (x.size() != n.size()) return false;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (x[i] < 1 || x[i] > n[i]) return false;
  }
  return true;
}

CiOrder compare_ci(const ConfidenceInterval& a, const ConfidenceInterval& b) {
  if (a.upper() <= b.lower()) return CiOrder::kABelow;
  if (b.upper() <= a.lower()) return CiOrder::kBBelow;
  return CiOrder::kOverlap;
}

double hoeffding_halfwidth(std::uint64_t n, double sigma, double alpha) {
  if (n == 0) throw std::invalid_argument("hoeffding_halfwidth: n must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("hoeffding_halfwidth: alpha outside (0, 1]");
  if (!(sigma >= 0.0)) throw std::invalid_argument("hoeffding_halfwidth: negative sigma");
  // Extended precision keeps the rounded result within an ulp of the exact value.
  const long double s = sigma;
  const long double v = 2.0L * s * s / static_cast<long double>(n) * std::log(2.0L / static_cast<long double>(alpha));
  return static_cast<double>(std::sqrt(v));
}

std::uint64_t samples_for_width(double target_h, double sigma, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("samples_for_width: alpha outside (0, 1]");
  if (!(sigma >= 0.0)) throw std::invalid_argument("samples_for_width: negative sigma");
  if (sigma == 0.0) return 1;
  if (!(target_h > 0.0) || !std::isfinite(target_h)) {
    throw std::invalid_argument("samples_for_width: target width must be positive and finite");
  }
  const double raw = std::ceil(2.0 * sigma * sigma * std::log(2.0 / alpha) / (target_h * target_h));
  constexpr double kHuge = 1e18;
  if (raw >= kHuge) return static_cast<std::uint64_t>(kHuge);
  auto n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw));
  // Floating rounding in the closed form can be off by one either way.
  while (n > 1 && hoeffding_halfwidth(n - 1, sigma, alpha) <= target_h) --n;
  while (hoeffding_halfwidth(n, sigma, alpha) > target_h) ++n;
  return n;
}

std::uint64_t next_batch_count(std::uint64_t count, std::uint64_t ceiling) {
  const auto grown = static_cast<std::uint64_t>(std::ceil(kBatchGrowth * static_cast<double>(count)));
  return std::min(ceiling, std::max(count + kInitialBatch, grown));
}

double SampleStats::half_width(double sigma) const {
  if (count == 0) return std::numeric_limits<double>::infinity();
  return hoeffding_halfwidth(count, sigma, alpha);
}

Guarantee Guarantee::pgs(double epsilon, double delta) {
  Guarantee g{epsilon, delta, std::nullopt};
  g.validate();
  return g;
}

Guarantee Guarantee::pcs_iz(double c, double delta) {
  Guarantee g{0.0, delta, c};
  g.validate();
  return g;
}

void Guarantee::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (iz_gap) {
    if (!(*iz_gap > 0.0) || !std::isfinite(*iz_gap)) throw std::invalid_argument("indifference gap must be positive");
  } else if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
}

double Sampler::sigma() const { return std::sqrt(oracle_->sigma2()); }

void Sampler::draw(PointView x, std::uint64_t n, SampleStats& stats) {
  if (n == 0) return;
  if (!oracle_->contains(x)) throw std::invalid_argument("Sampler::draw: point outside the grid");
  if (stats.count + n > cap_) {
    throw BudgetExceeded("per-point sample cap exceeded (" + std::to_string(stats.count + n) + " > " +
                         std::to_string(cap_) + ")");
  }
  stats.sum += oracle_->sample_sum(x, n, *rng_);
  stats.count += n;
  *draws_ += n;
}

Sampler Sampler::rebind(const StochasticOracle& oracle) const {
  Sampler s(*this);
  s.oracle_ = &oracle;
  return s;
}

void sample_to_width(Sampler& sampler, PointView x, double target_h, SampleStats& stats) {
  const auto need = samples_for_width(target_h, sampler.sigma(), stats.alpha);
  if (stats.count < need) sampler.draw(x, need - stats.count, stats);
}

bool sample_batch_toward(Sampler& sampler, PointView x, double target_h, SampleStats& stats) {
  const auto need = samples_for_width(target_h, sampler.sigma(), stats.alpha);
  if (stats.count >= need) return false;
  sampler.draw(x, next_batch_count(stats.count, need) - stats.count, stats);
  return true;
}

SampleStats& SampleBook::at(PointView x) {
  auto [it, inserted] = entries_.try_emplace(GridPoint(x.begin(), x.end()));
  if (inserted) it->second.alpha = alpha_;
  return it->second;
}

const SampleStats* SampleBook::find(PointView x) const {
  auto it = entries_.find(GridPoint(x.begin(), x.end()));
  return it == entries_.end() ? nullptr : &it->second;
}

std::uint64_t SampleBook::total_count() const {
  std::uint64_t total = 0;
  for (const auto& [_, s] : entries_) total += s.count;
  return total;
}

GaussianNoiseOracle::GaussianNoiseOracle(std::vector<std::int64_t> dims, Objective f, double sigma)
    : dims_(std::move(dims)), f_(std::move(f)), sigma_(sigma) {
  if (dims_.empty()) throw std::invalid_argument("oracle needs at least one dimension");
  for (auto n : dims_) {
    if (n < 1) throw std::invalid_argument("grid sizes must be positive");
  }
  if (!(sigma_ >= 0.0)) throw std::invalid_argument("noise sigma must be nonnegative");
}

double GaussianNoiseOracle::sample(PointView x, Rng& rng) const {
  if (sigma_ == 0.0) return f_(x);
  std::normal_distribution<double> noise(0.0, sigma_);
  return f_(x) + noise(rng);
}

double GaussianNoiseOracle::sample_sum(PointView x, std::uint64_t n, Rng& rng) const {
  const double nn = static_cast<double>(n);
  if (sigma_ == 0.0) return nn * f_(x);
  std::normal_distribution<double> noise(0.0, sigma_ * std::sqrt(nn));
  return nn * f_(x) + noise(rng);
}

AffineRestrictionOracle::AffineRestrictionOracle(const StochasticOracle& base, GridPoint offset,
                                                 std::vector<GridPoint> columns,
                                                 std::vector<std::int64_t> sizes)
    : base_(&base), offset_(std::move(offset)), columns_(std::move(columns)), sizes_(std::move(sizes)) {
  if (offset_.size() != base.dims().size()) throw std::invalid_argument("restriction offset has wrong length");
  if (columns_.size() != sizes_.size()) throw std::invalid_argument("one column per restricted coordinate");
  for (const auto& c : columns_) {
    if (c.size() != offset_.size()) throw std::invalid_argument("restriction column has wrong length");
  }
  for (auto n : sizes_) {
    if (n < 1) throw std::invalid_argument("restricted sizes must be positive");
  }
}

GridPoint AffineRestrictionOracle::lift(PointView t) const {
  GridPoint x = offset_;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += columns_[j][i] * t[j];
  }
  return x;
}

double AffineRestrictionOracle::sample(PointView t, Rng& rng) const { return base_->sample(lift(t), rng); }

double AffineRestrictionOracle::sample_sum(PointView t, std::uint64_t n, Rng& rng) const {
  return base_->sample_sum(lift(t), n, rng);
}

AffineRestrictionOracle AffineRestrictionOracle::fix_last(const StochasticOracle& base, std::int64_t value) {
  const auto& n = base.dims();
  const std::size_t d = n.size();
  if (d < 2) throw std::invalid_argument("fix_last needs at least two dimensions");
  if (value < 1 || value > n.back()) throw std::invalid_argument("fixed coordinate outside the grid");
  GridPoint offset(d, 0);
  offset.back() = value;
  std::vector<GridPoint> cols;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    GridPoint c(d, 0);
    c[j] = 1;
    cols.push_back(std::move(c));
  }
  return AffineRestrictionOracle(base, std::move(offset), std::move(cols),
                                 std::vector<std::int64_t>(n.begin(), n.end() - 1));
}

AffineRestrictionOracle AffineRestrictionOracle::sub_box(const StochasticOracle& base, const GridPoint& lo,
                                                         const GridPoint& hi) {
  const auto& n = base.dims();
  const std::size_t d = n.size();
  if (lo.size() != d || hi.size() != d) throw std::invalid_argument("sub_box bounds have wrong length");
  GridPoint offset(d, 0);
  std::vector<GridPoint> cols;
  std::vector<std::int64_t> sizes;
  for (std::size_t i = 0; i < d; ++i) {
    if (lo[i] < 1 || hi[i] > n[i] || lo[i] > hi[i]) throw std::invalid_argument("sub_box outside the grid");
    if (lo[i] == hi[i]) {
      offset[i] = lo[i];
    } else {
      offset[i] = lo[i] - 1;
      GridPoint c(d, 0);
      c[i] = 1;
      cols.push_back(std::move(c));
      sizes.push_back(hi[i] - lo[i] + 1);
    }
  }
  return AffineRestrictionOracle(base, std::move(offset), std::move(cols), std::move(sizes));
}

}  // namespace cso

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cso/rng.hpp"

namespace cso {

using GridPoint = std::vector<std::int64_t>;
using PointView = std::span<const std::int64_t>;

inline constexpr std::uint64_t kSampleCap = 1'000'000'000'000ULL;
inline constexpr std::uint64_t kInitialBatch = 8;
inline constexpr double kBatchGrowth = 1.5;

/// Noisy evaluator of a convex objective on the grid prod_i [1, N_i].
class StochasticOracle {
 public:
  virtual ~StochasticOracle() = default;

  virtual const std::vector<std::int64_t>& dims() const = 0;
  /// Sub-Gaussian variance proxy of one draw.
  virtual double sigma2() const = 0;
  virtual double sample(PointView x, Rng& rng) const = 0;
  /// Sum of n independent draws at x. Override when the sum has a cheap exact law.
  virtual double sample_sum(PointView x, std::uint64_t n, Rng& rng) const;

  int dim() const { return static_cast<int>(dims().size()); }
  bool contains(PointView x) const;
};

struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;
  double lower() const { return mean - half_width; }
  double upper() const { return mean + half_width; }
};

enum class CiOrder { kABelow, kBBelow, kOverlap };

/// Ties count as separated: A is below B when a.upper() <= b.lower().
CiOrder compare_ci(const ConfidenceInterval& a, const ConfidenceInterval& b);

/// sqrt(2 sigma^2 / n * ln(2 / alpha)).
double hoeffding_halfwidth(std::uint64_t n, double sigma, double alpha);

/// Smallest n >= 1 with hoeffding_halfwidth(n, sigma, alpha) <= target_h.
std::uint64_t samples_for_width(double target_h, double sigma, double alpha);

/// Next cumulative count in the geometric batch schedule, clipped to `ceiling`.
std::uint64_t next_batch_count(std::uint64_t count, std::uint64_t ceiling);

struct SampleStats {
  std::uint64_t count = 0;
  double sum = 0.0;
  double alpha = 0.05;

  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  double half_width(double sigma) const;
  ConfidenceInterval interval(double sigma) const { return {mean(), half_width(sigma)}; }
  void merge(const SampleStats& other) {
    count += other.count;
    sum += other.sum;
  }
};

/// Precision request: epsilon-optimal with probability 1 - delta, or, when
/// iz_gap is set, exactly optimal under an indifference-zone gap.
struct Guarantee {
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<double> iz_gap;

  static Guarantee pgs(double epsilon, double delta);
  static Guarantee pcs_iz(double c, double delta);
  void validate() const;
  bool is_iz() const { return iz_gap.has_value(); }
};

/// Draws from one oracle with one stream and keeps the running sample total.
class Sampler {
 public:
  Sampler(const StochasticOracle& oracle, Rng& rng, std::uint64_t per_point_cap = kSampleCap)
      : oracle_(&oracle), rng_(&rng), cap_(per_point_cap) {}

  const StochasticOracle& oracle() const { return *oracle_; }
  Rng& rng() { return *rng_; }
  double sigma() const;
  std::uint64_t draws() const { return *draws_; }
  std::uint64_t cap() const { return cap_; }

  /// Adds n fresh draws at x into stats.
  void draw(PointView x, std::uint64_t n, SampleStats& stats);

  /// Same sampler on a different oracle; draws still land in this counter.
  Sampler rebind(const StochasticOracle& oracle) const;

 private:
  const StochasticOracle* oracle_;
  Rng* rng_;
  std::uint64_t cap_;
  std::shared_ptr<std::uint64_t> draws_ = std::make_shared<std::uint64_t>(0);
};

/// Tops stats up to the count whose half-width is at most target_h.
void sample_to_width(Sampler& sampler, PointView x, double target_h, SampleStats& stats);

/// One batch toward target_h. Returns false when stats already meets it.
bool sample_batch_toward(Sampler& sampler, PointView x, double target_h, SampleStats& stats);

/// Per-point sample store shared by the stages of one solve.
class SampleBook {
 public:
  explicit SampleBook(double alpha) : alpha_(alpha) {}
  SampleStats& at(PointView x);
  const SampleStats* find(PointView x) const;
  double alpha() const { return alpha_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t total_count() const;

 private:
  double alpha_;
  std::map<GridPoint, SampleStats> entries_;
};

/// f(x) observed with additive N(0, sigma^2) noise.
class GaussianNoiseOracle : public StochasticOracle {
 public:
  using Objective = std::function<double(PointView)>;

  GaussianNoiseOracle(std::vector<std::int64_t> dims, Objective f, double sigma);

  const std::vector<std::int64_t>& dims() const override { return dims_; }
  double sigma2() const override { return sigma_ * sigma_; }
  double sample(PointView x, Rng& rng) const override;
  /// Exact: the sum of n draws is N(n f(x), n sigma^2).
  double sample_sum(PointView x, std::uint64_t n, Rng& rng) const override;

  double value(PointView x) const { return f_(x); }

 private:
  std::vector<std::int64_t> dims_;
  Objective f_;
  double sigma_;
};

/// Oracle on prod_j [1, sizes_j] evaluating base(offset + M t).
/// M is stored column-major as `columns`, one integer column per free coordinate.
class AffineRestrictionOracle : public StochasticOracle {
 public:
  AffineRestrictionOracle(const StochasticOracle& base, GridPoint offset,
                          std::vector<GridPoint> columns, std::vector<std::int64_t> sizes);

  const std::vector<std::int64_t>& dims() const override { return sizes_; }
  double sigma2() const override { return base_->sigma2(); }
  double sample(PointView t, Rng& rng) const override;
  double sample_sum(PointView t, std::uint64_t n, Rng& rng) const override;

  GridPoint lift(PointView t) const;

  /// Fix the trailing coordinate of a d-dimensional base at `value`.
  static AffineRestrictionOracle fix_last(const StochasticOracle& base, std::int64_t value);
  /// Sub-box [lo, hi]; coordinates with lo == hi are dropped from the domain.
  static AffineRestrictionOracle sub_box(const StochasticOracle& base, const GridPoint& lo,
                                         const GridPoint& hi);

 private:
  const StochasticOracle* base_;
  GridPoint offset_;
  std::vector<GridPoint> columns_;
  std::vector<std::int64_t> sizes_;
};

}  // namespace cso

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cso/oracle.hpp"

namespace cso::onedim {

struct Trisection {
  std::int64_t n13;
  std::int64_t n23;
};

/// Interior 3-quantiles of [lo, hi]: floor(2lo/3 + hi/3) and ceil(lo/3 + 2hi/3). Needs hi - lo > 2.
Trisection trisection(std::int64_t lo, std::int64_t hi);

enum class AsUpdate { kRaiseLower, kDropUpper, kShrinkBoth };

struct AsTrace {
  std::vector<std::pair<std::int64_t, std::int64_t>> intervals;  // [L, U] after each update
  std::vector<AsUpdate> updates;
  int iterations() const { return static_cast<int>(updates.size()); }
};

/// Trisection search on a 1-d convex objective. PGS mode uses epsilon; PCS-IZ mode uses the gap.
std::int64_t adaptive_sampling(Sampler& sampler, const Guarantee& guarantee, AsTrace* trace = nullptr);

/// Samples every point to half-width <= width and returns the empirical argmin (ties: smallest).
std::int64_t finalist_subproblem(Sampler& sampler, SampleBook& book, std::span<const std::int64_t> points,
                                 double width);

struct ActiveSet {
  std::int64_t lo = 1;
  std::int64_t stride = 1;
  std::int64_t size = 0;

  std::int64_t at(std::int64_t j) const { return lo + j * stride; }
  std::int64_t hi() const { return at(size - 1); }
  std::vector<std::int64_t> points() const;
};

enum class EasOp { kTypeOne, kTypeTwo };

struct EasTrace {
  std::vector<ActiveSet> sets;  // the active set after each operation, first entry is [N]
  std::vector<EasOp> ops;
};

/// Active-set elimination with stride doubling; expected cost roughly independent of N.
std::int64_t enhanced_adaptive_sampling(Sampler& sampler, const Guarantee& guarantee, EasTrace* trace = nullptr);

}  // namespace cso::onedim

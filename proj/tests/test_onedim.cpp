#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cso/models.hpp"
#include "cso/onedim.hpp"

namespace {

using namespace cso;
using namespace cso::onedim;

// Records the distinct points an algorithm touched.
class RecordingOracle : public StochasticOracle {
 public:
  RecordingOracle(std::int64_t n, double sigma, std::function<double(std::int64_t)> f)
      : inner_({n}, [f](PointView x) { return f(x[0]); }, sigma) {}
  const std::vector<std::int64_t>& dims() const override { return inner_.dims(); }
  double sigma2() const override { return inner_.sigma2(); }
  double sample(PointView x, Rng& rng) const override {
    visited.insert(x[0]);
    return inner_.sample(x, rng);
  }
  double sample_sum(PointView x, std::uint64_t n, Rng& rng) const override {
    visited.insert(x[0]);
    return inner_.sample_sum(x, n, rng);
  }
  mutable std::set<std::int64_t> visited;

 private:
  GaussianNoiseOracle inner_;
};

GaussianNoiseOracle line(std::int64_t n, double sigma, std::function<double(std::int64_t)> f) {
  return GaussianNoiseOracle({n}, [f](PointView x) { return f(x[0]); }, sigma);
}

TEST(Trisection, Examples) {
  EXPECT_EQ(trisection(1, 150).n13, 50);
  EXPECT_EQ(trisection(1, 150).n23, 101);
  EXPECT_EQ(trisection(1, 4).n13, 2);
  EXPECT_EQ(trisection(1, 4).n23, 3);
  EXPECT_EQ(trisection(7, 13).n13, 9);
  EXPECT_EQ(trisection(7, 13).n23, 11);
  EXPECT_THROW(trisection(1, 3), std::invalid_argument);
}

TEST(Trisection, InteriorAndWellSeparated) {
  for (std::int64_t lo = 1; lo < 40; ++lo) {
    for (std::int64_t hi = lo + 3; hi < 80; ++hi) {
      const auto t = trisection(lo, hi);
      ASSERT_GT(t.n13, lo);
      ASSERT_LT(t.n23, hi);
      ASSERT_GE(3 * (t.n23 - t.n13), hi - lo);
    }
  }
}

TEST(AdaptiveSampling, SingletonDomain) {
  auto o = line(1, 1.0, [](std::int64_t) { return 0.0; });
  Rng rng(1);
  Sampler s(o, rng);
  AsTrace tr;
  EXPECT_EQ(adaptive_sampling(s, Guarantee::pgs(0.1, 0.1), &tr), 1);
  EXPECT_EQ(tr.iterations(), 0);
}

TEST(AdaptiveSampling, ThreePointsGoStraightToFinalists) {
  auto o = line(3, 0.0, [](std::int64_t x) { return std::abs(x - 2.0); });
  Rng rng(1);
  Sampler s(o, rng);
  AsTrace tr;
  EXPECT_EQ(adaptive_sampling(s, Guarantee::pgs(0.1, 0.1), &tr), 2);
  EXPECT_EQ(tr.iterations(), 0);
  EXPECT_EQ(s.draws(), 3u);
}

TEST(AdaptiveSampling, NoiselessAbsoluteValue) {
  RecordingOracle o(150, 0.0, [](std::int64_t x) { return std::abs(x - 31.0); });
  Rng rng(2);
  Sampler s(o, rng);
  EXPECT_EQ(adaptive_sampling(s, Guarantee::pgs(0.2, 0.05)), 31);
  EXPECT_EQ(s.draws(), o.visited.size());  // one sample per visited point
}

TEST(AdaptiveSampling, IterationBoundWithFlatObjective) {
  for (std::int64_t n : {4, 5, 10, 57, 100, 1000, 10000, 100000, 1000000}) {
    auto o = line(n, 0.0, [](std::int64_t) { return 0.0; });
    Rng rng(3);
    Sampler s(o, rng);
    AsTrace tr;
    adaptive_sampling(s, Guarantee::pgs(0.1, 0.1), &tr);
    ASSERT_LE(tr.iterations(), std::log(static_cast<double>(n)) / std::log(1.5) + 1.0) << "N=" << n;
    std::int64_t prev = n;
    for (const auto& [lo, hi] : tr.intervals) {
      const std::int64_t count = hi - lo + 1;
      ASSERT_LE(count, 2 * prev / 3 + 1);
      prev = count;
    }
  }
}

TEST(AdaptiveSamplingIz, SingletonAndMonotone) {
  auto one = line(1, 1.0, [](std::int64_t) { return 0.0; });
  Rng rng(4);
  Sampler s1(one, rng);
  EXPECT_EQ(adaptive_sampling(s1, Guarantee::pcs_iz(0.5, 0.05)), 1);

  auto mono = line(100, 0.0, [](std::int64_t x) { return 0.5 * x; });
  Sampler s2(mono, rng);
  EXPECT_EQ(adaptive_sampling(s2, Guarantee::pcs_iz(0.5, 0.05)), 1);
}

TEST(AdaptiveSamplingIz, NoisyCoverage) {
  auto o = line(20, 1.0, [](std::int64_t x) { return 0.5 * std::abs(x - 7.0); });
  int hits = 0;
  for (int r = 0; r < 200; ++r) {
    Rng rng = seed_stream(5, {std::int64_t{r}});
    Sampler s(o, rng);
    hits += adaptive_sampling(s, Guarantee::pcs_iz(0.5, 0.05)) == 7;
  }
  EXPECT_GE(hits, 190);
}

TEST(EnhancedAdaptiveSampling, TwoPointsSkipTheLoop) {
  auto o = line(2, 0.0, [](std::int64_t x) { return x == 2 ? 0.0 : 1.0; });
  Rng rng(6);
  Sampler s(o, rng);
  EasTrace tr;
  EXPECT_EQ(enhanced_adaptive_sampling(s, Guarantee::pgs(0.1, 0.1), &tr), 2);
  EXPECT_TRUE(tr.ops.empty());
}

TEST(EnhancedAdaptiveSampling, FlatNoisyObjectiveHalvesByStride) {
  auto o = line(5, 1.0, [](std::int64_t) { return 0.0; });
  Rng rng(7);
  Sampler s(o, rng);
  EasTrace tr;
  enhanced_adaptive_sampling(s, Guarantee::pgs(0.2, 0.1), &tr);
  ASSERT_EQ(tr.ops.size(), 2u);
  EXPECT_EQ(tr.ops[0], EasOp::kTypeTwo);
  EXPECT_EQ(tr.ops[1], EasOp::kTypeTwo);
  EXPECT_EQ(tr.sets[1].points(), (std::vector<std::int64_t>{1, 3, 5}));
  EXPECT_EQ(tr.sets[2].points(), (std::vector<std::int64_t>{1, 5}));
}

TEST(EnhancedAdaptiveSampling, ExactTiesSeparateUnderTheInclusiveRule) {
  // Zero-width intervals at equal values touch, which the inclusive comparison treats as separated.
  auto o = line(5, 0.0, [](std::int64_t) { return 0.0; });
  Rng rng(8);
  Sampler s(o, rng);
  EasTrace tr;
  EXPECT_EQ(enhanced_adaptive_sampling(s, Guarantee::pgs(0.2, 0.1), &tr), 1);
  ASSERT_EQ(tr.ops.size(), 1u);
  EXPECT_EQ(tr.ops[0], EasOp::kTypeOne);
  EXPECT_EQ(tr.sets.back().size, 1);
}

TEST(EnhancedAdaptiveSampling, ActiveSetInvariants) {
  for (int r = 0; r < 40; ++r) {
    Rng mrng = seed_stream(9, {std::int64_t{r}});
    auto model = bench::SeparableModel::random(1, 60, mrng, 0.5);
    auto o = model.oracle();
    Sampler s(o, mrng);
    EasTrace tr;
    enhanced_adaptive_sampling(s, Guarantee::pgs(0.3, 0.05), &tr);
    for (std::size_t k = 0; k < tr.ops.size(); ++k) {
      const auto& before = tr.sets[k];
      const auto& after = tr.sets[k + 1];
      ASSERT_LT(after.size, before.size);
      ASSERT_GE(after.lo, before.lo);  // the smallest active point only moves up
      if (tr.ops[k] == EasOp::kTypeTwo) {
        ASSERT_EQ(after.lo, before.lo);
        ASSERT_EQ(after.stride, 2 * before.stride);
        ASSERT_EQ(after.size, (before.size + 1) / 2);
      } else {
        ASSERT_EQ(after.stride, before.stride);
      }
    }
  }
}

TEST(OneDimensionalSolvers, PgsCoverageOnSeparableModel) {
  int as_ok = 0;
  int eas_ok = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    Rng mrng = seed_stream(10, {"model", std::int64_t{r}});
    auto model = bench::SeparableModel::random(1, 50, mrng, 1.0);
    auto o = model.oracle();
    Rng r1 = seed_stream(10, {"as", std::int64_t{r}});
    Rng r2 = seed_stream(10, {"eas", std::int64_t{r}});
    Sampler s1(o, r1);
    Sampler s2(o, r2);
    const auto g = Guarantee::pgs(0.2, 1e-6);
    as_ok += model.value(GridPoint{adaptive_sampling(s1, g)}) <= 0.2;
    eas_ok += model.value(GridPoint{enhanced_adaptive_sampling(s2, g)}) <= 0.2;
  }
  EXPECT_EQ(as_ok, reps);
  EXPECT_EQ(eas_ok, reps);
}

TEST(OneDimensionalSolvers, ZeroNoiseFindsExactOptimum) {
  Rng rng(11);
  for (int r = 0; r < 100; ++r) {
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 200);
    const std::int64_t star = 1 + static_cast<std::int64_t>(rng() % n);
    const double slope = 0.5 + rng.uniform01();
    auto o = line(n, 0.0, [=](std::int64_t x) { return slope * std::abs(x - star); });
    Sampler s(o, rng);
    const auto g = Guarantee::pgs(0.4, 0.01);
    ASSERT_EQ(adaptive_sampling(s, g), star);
    ASSERT_EQ(enhanced_adaptive_sampling(s, g), star);
  }
}

TEST(FinalistSubproblem, Examples) {
  auto o = line(6, 0.0, [](std::int64_t x) { return x == 4 ? 3.0 : x == 5 ? 1.0 : 2.0; });
  Rng rng(12);
  Sampler s(o, rng);
  SampleBook book(0.01);
  const std::int64_t pts[3] = {4, 5, 6};
  EXPECT_EQ(finalist_subproblem(s, book, pts, 0.1), 5);

  const std::int64_t single[1] = {2};
  EXPECT_EQ(finalist_subproblem(s, book, single, 0.1), 2);
  EXPECT_EQ(book.find(single)->count, 1u);
}

TEST(FinalistSubproblem, TwoArmGaussianCoverage) {
  auto o = line(2, 1.0, [](std::int64_t x) { return x == 1 ? 0.0 : 0.5; });
  int first = 0;
  for (int r = 0; r < 500; ++r) {
    Rng rng = seed_stream(13, {std::int64_t{r}});
    Sampler s(o, rng);
    SampleBook book(0.01);
    const std::int64_t pts[2] = {1, 2};
    first += finalist_subproblem(s, book, pts, 0.1) == 1;
  }
  EXPECT_GE(first, 495);
}

}  // namespace

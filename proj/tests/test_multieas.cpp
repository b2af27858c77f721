#include <gtest/gtest.h>

#include <cmath>

#include "cso/models.hpp"
#include "cso/multieas.hpp"
#include "lnat.hpp"

namespace {

using namespace cso;
using namespace cso::multieas;

// min over the leading coordinates with the last one fixed, by exhaustive scan.
double slice_min(const std::function<double(PointView)>& f, const std::vector<std::int64_t>& dims, std::int64_t x) {
  std::vector<std::int64_t> inner(dims.begin(), dims.end() - 1);
  return bench::brute_force_min(
             [&](PointView y) {
               GridPoint p(y.begin(), y.end());
               p.push_back(x);
               return f(p);
             },
             inner)
      .value;
}

TEST(ValueCertificate, SampleCountExample) {
  GaussianNoiseOracle o({5}, [](PointView) { return 2.0; }, 1.0);
  Rng rng(1);
  Sampler s(o, rng);
  SampleBook book(0.1);
  const std::int64_t x[1] = {3};
  value_certificate(s, book, x, 0.4, 0.1);
  EXPECT_EQ(s.draws(), 877u);  // ceil(2 ln 80 / 0.01)
  value_certificate(s, book, x, 0.4, 0.1);
  EXPECT_EQ(s.draws(), 877u);
  value_certificate(s, book, x, 0.8, 0.1);
  EXPECT_EQ(s.draws(), 877u);
}

TEST(ValueCertificate, NoiselessIsExact) {
  GaussianNoiseOracle o({5, 5}, [](PointView p) { return double(p[0] * 10 + p[1]); }, 0.0);
  Rng rng(2);
  Sampler s(o, rng);
  SampleBook book(0.1);
  const std::int64_t x[2] = {2, 4};
  EXPECT_EQ(value_certificate(s, book, x, 0.1, 0.1), 24.0);
  EXPECT_EQ(s.draws(), 1u);
  const std::int64_t out[2] = {6, 1};
  EXPECT_THROW(value_certificate(s, book, out, 0.1, 0.1), std::invalid_argument);
}

TEST(MarginalEstimate, BaseCaseSamplesDirectly) {
  GaussianNoiseOracle o({8}, [](PointView p) { return 0.5 * double(p[0]); }, 0.0);
  Rng rng(3);
  Sampler s(o, rng);
  const auto r = marginal_estimate(s, 6, 0.1, 0.05);
  EXPECT_EQ(r.witness, GridPoint{6});
  EXPECT_EQ(r.estimate, 3.0);
  EXPECT_THROW(marginal_estimate(s, 9, 0.1, 0.05), std::invalid_argument);
}

TEST(MarginalEstimate, SeparableClosedForm) {
  // min over x1 of c1 g(x1*; x1) is 0, leaving c2 g(x2*; x2)
  Rng rng(4);
  auto model = bench::SeparableModel::random(2, 20, rng, 0.0);
  auto o = model.oracle();
  Sampler s(o, rng);
  for (std::int64_t x = 1; x <= 20; ++x) {
    const auto r = marginal_estimate(s, x, 0.01, 0.05);
    EXPECT_NEAR(r.estimate, model.weights[1] * bench::separable_g(model.optimum[1], x, 20), 0.01) << "x=" << x;
    EXPECT_EQ(r.witness.back(), x);
    EXPECT_NEAR(model.value(r.witness), r.estimate, 1e-12);
  }
}

TEST(SolveRecursive, OneDimension) {
  GaussianNoiseOracle o({40}, [](PointView p) { return 0.2 * std::abs(double(p[0]) - 9.0); }, 0.0);
  Rng rng(5);
  Sampler s(o, rng);
  const auto r = solve_recursive(s, Guarantee::pgs(0.1, 0.1));
  EXPECT_EQ(r.witness, GridPoint{9});
  EXPECT_EQ(r.estimate, 0.0);
}

TEST(SolveRecursive, NoiselessSeparableExact) {
  for (int rep = 0; rep < 10; ++rep) {
    Rng rng = seed_stream(6, {std::int64_t{rep}});
    auto model = bench::SeparableModel::random(2, 10, rng, 0.0);
    auto o = model.oracle();
    Sampler s(o, rng);
    const auto r = solve_recursive(s, Guarantee::pgs(0.01, 0.1));
    EXPECT_EQ(r.witness, model.optimum);
    EXPECT_EQ(r.estimate, 0.0);
  }
}

TEST(SolveRecursive, NoisyCoverage) {
  int ok = 0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng = seed_stream(7, {std::int64_t{rep}});
    auto model = bench::SeparableModel::random(2, 30, rng, 1.0);
    auto o = model.oracle();
    Sampler s(o, rng);
    const auto r = solve_recursive(s, Guarantee::pgs(0.3, 0.05));
    ok += std::abs(r.estimate) <= 0.3 && model.value(r.witness) <= 0.3;
  }
  EXPECT_GE(ok, 95);
}

TEST(SolveRecursive, TierWidthsAndRefreshes) {
  Rng rng(8);
  auto model = bench::SeparableModel::random(2, 40, rng, 1.0);
  auto o = model.oracle();
  Sampler s(o, rng);
  OuterTrace trace;
  const double eps = 0.5;
  solve_recursive(s, Guarantee::pgs(eps, 0.1), &trace);
  ASSERT_EQ(trace.widths.size(), trace.ops.size());
  ASSERT_EQ(trace.sets.size(), trace.ops.size() + 1);
  ASSERT_FALSE(trace.tier_sizes.empty());
  EXPECT_EQ(trace.tier_sizes.front(), 40);
  for (std::size_t k = 1; k < trace.tier_sizes.size(); ++k) {
    EXPECT_LE(trace.tier_sizes[k], trace.tier_sizes[k - 1] / 2);
  }
  for (std::size_t k = 0; k < trace.ops.size(); ++k) {
    // outer comparisons run at eps / 2
    EXPECT_LE(trace.widths[k], static_cast<double>(trace.sets[k].size) * (eps / 2.0) / 80.0 + 1e-15);
    EXPECT_LT(trace.sets[k + 1].size, trace.sets[k].size);
  }
}

TEST(Marginal, ConvexityAndExchangeOfMinimization) {
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const std::int64_t n = 3 + static_cast<std::int64_t>(rng() % 8);
    const bool separable = k % 2 == 0;
    auto model = bench::SeparableModel::random(d, n, rng, 0.0);
    const auto q = test_support::QuadraticLnat::random(d, static_cast<double>(n), rng);
    std::function<double(PointView)> f = separable ? std::function<double(PointView)>([&](PointView p) { return model.value(p); })
                                                   : std::function<double(PointView)>([&](PointView p) { return q(p); });
    const std::vector<std::int64_t> dims(static_cast<std::size_t>(d), n);
    std::vector<double> marg;
    for (std::int64_t x = 1; x <= n; ++x) marg.push_back(slice_min(f, dims, x));
    for (std::size_t x = 1; x + 1 < marg.size(); ++x) ASSERT_GE(marg[x - 1] + marg[x + 1], 2.0 * marg[x] - 1e-9);
    ASSERT_NEAR(*std::min_element(marg.begin(), marg.end()), bench::brute_force_min(f, dims).value, 1e-12);
  }
}

TEST(SolveRecursive, NoiselessQuadraticNearOptimal) {
  Rng rng(10);
  for (int k = 0; k < 10; ++k) {
    const auto q = test_support::QuadraticLnat::random(3, 6.0, rng);
    GaussianNoiseOracle o({6, 6, 6}, [&](PointView p) { return q(p); }, 0.0);
    Sampler s(o, rng);
    const auto r = solve_recursive(s, Guarantee::pgs(0.2, 0.1));
    const auto best = bench::brute_force_min([&](PointView p) { return q(p); }, o.dims());
    EXPECT_LE(q(r.witness), best.value + 0.2);
    EXPECT_NEAR(r.estimate, best.value, 0.2);
  }
}

}  // namespace

#include <gtest/gtest.h>

#include <cmath>

#include "cso/cutplane.hpp"
#include "cso/lovasz.hpp"
#include "cso/models.hpp"

namespace {

using namespace cso;
using namespace cso::cutplane;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(VaidyaIterations, Formula) {
  // ceil(5 * 2 * ln(8 * 2 * 1 * 50 / 0.5)) = ceil(10 * ln 1600)
  EXPECT_EQ(vaidya_iterations(2, 1.0, 50.0, 0.5), static_cast<std::int64_t>(std::ceil(10.0 * std::log(1600.0))));
  EXPECT_EQ(vaidya_iterations(1, 0.0, 10.0, 1.0), 5);  // log argument floored at e
}

TEST(StochasticVaidya, OneDimensionalAbsoluteValue) {
  GaussianNoiseOracle o({100}, [](PointView p) { return std::abs(double(p[0]) - 31.0); }, 0.1);
  int ok = 0;
  for (int r = 0; r < 200; ++r) {
    Rng rng = seed_stream(1, {std::int64_t{r}});
    Sampler s(o, rng);
    const auto x = stochastic_vaidya(s, Guarantee::pgs(0.5, 0.05), 1.0);
    ok += o.value(x) <= 0.5;
  }
  EXPECT_GE(ok, 190);
}

TEST(StochasticVaidya, NoiselessSeparableIsExact) {
  for (auto kind : {EngineKind::kVaidya, EngineKind::kAnalyticCenter, EngineKind::kRandomWalk}) {
    for (int r = 0; r < 5; ++r) {
      Rng rng = seed_stream(2, {std::int64_t{r}});
      auto model = bench::SeparableModel::random(2, 50, rng, 0.0);
      auto o = model.oracle();
      Sampler s(o, rng);
      VaidyaOptions opt;
      opt.engine = kind;
      opt.seed = 9;
      // any point within 0.1 of the optimum is the optimum itself on this model
      const auto x = stochastic_vaidya(s, Guarantee::pgs(0.01, 0.1), model.lipschitz(), opt);
      EXPECT_EQ(x, model.optimum) << "engine " << static_cast<int>(kind) << " rep " << r;
    }
  }
}

TEST(StochasticVaidya, OptimumIsNeverCut) {
  for (int r = 0; r < 10; ++r) {
    Rng rng = seed_stream(3, {std::int64_t{r}});
    auto model = bench::SeparableModel::random(2, 30, rng, 0.0);
    auto o = model.oracle();
    Sampler s(o, rng);
    VaidyaTrace trace;
    trace.keep_polytopes = true;
    stochastic_vaidya(s, Guarantee::pgs(0.05, 0.1), model.lipschitz(), {}, &trace);
    const Eigen::VectorXd opt = vec({double(model.optimum[0]), double(model.optimum[1])});
    ASSERT_FALSE(trace.polytopes.empty());
    for (const auto& p : trace.polytopes) ASSERT_TRUE(p.contains(opt, 1e-7));
  }
}

TEST(StochasticVaidya, TraceBookkeeping) {
  Rng rng(4);
  auto model = bench::SeparableModel::random(3, 12, rng, 0.5);
  auto o = model.oracle();
  Sampler s(o, rng);
  VaidyaTrace trace;
  const auto x = stochastic_vaidya(s, Guarantee::pgs(0.5, 0.1), model.lipschitz(), {}, &trace);
  EXPECT_TRUE(o.contains(x));
  EXPECT_EQ(trace.queries.size(), trace.query_values.size());
  EXPECT_LE(trace.iterations, vaidya_iterations(3, model.lipschitz(), 12, 0.5));
  EXPECT_EQ(trace.iterations, trace.cuts + trace.removals + trace.box_repairs +
                                  static_cast<int>(trace.zero_gradient_exit));
  EXPECT_FALSE(trace.fell_back);
}

TEST(StochasticVaidya, RejectsBadInputs) {
  GaussianNoiseOracle o({5, 5}, [](PointView) { return 0.0; }, 1.0);
  Rng rng(5);
  Sampler s(o, rng);
  EXPECT_THROW(stochastic_vaidya(s, Guarantee::pcs_iz(1.0, 0.1), 1.0), std::invalid_argument);
  EXPECT_THROW(stochastic_vaidya(s, Guarantee::pgs(1.0, 0.1), -1.0), std::invalid_argument);
  VaidyaOptions bad;
  bad.so_relax_factor = 0.0;
  EXPECT_THROW(stochastic_vaidya(s, Guarantee::pgs(1.0, 0.1), 1.0, bad), std::invalid_argument);
}

TEST(StochasticVaidya, SizeOneCoordinates) {
  GaussianNoiseOracle o({1, 9}, [](PointView p) { return std::abs(double(p[1]) - 6.0); }, 0.0);
  Rng rng(6);
  Sampler s(o, rng);
  EXPECT_EQ(stochastic_vaidya(s, Guarantee::pgs(0.1, 0.1), 1.0), (GridPoint{1, 6}));
  GaussianNoiseOracle single({1, 1}, [](PointView) { return 3.0; }, 1.0);
  Sampler s1(single, rng);
  EXPECT_EQ(stochastic_vaidya(s1, Guarantee::pgs(0.1, 0.1), 1.0), (GridPoint{1, 1}));
}

TEST(FinalistPgs, Examples) {
  GaussianNoiseOracle o({9, 9}, [](PointView p) { return std::abs(double(p[0]) - 2.0) + std::abs(double(p[1]) - 7.0); },
                        0.0);
  Rng rng(7);
  Sampler s(o, rng);
  const std::vector<Eigen::VectorXd> cands{vec({5.0, 5.0}), vec({2.5, 6.5}), vec({2.0, 7.0}), vec({8.0, 1.0})};
  EXPECT_EQ(finalist_pgs(s, cands, Guarantee::pgs(0.1, 0.1)), vec({2.0, 7.0}));
  EXPECT_EQ(finalist_pgs(s, {vec({4.4, 4.4})}, Guarantee::pgs(0.1, 0.1)), vec({4.4, 4.4}));
  // equal extension values keep the earliest candidate
  EXPECT_EQ(finalist_pgs(s, {vec({3.0, 6.0}), vec({1.0, 8.0})}, Guarantee::pgs(0.1, 0.1)), vec({3.0, 6.0}));
  EXPECT_THROW(finalist_pgs(s, {}, Guarantee::pgs(0.1, 0.1)), std::invalid_argument);
}

TEST(FinalistPgs, NoisyCoverage) {
  GaussianNoiseOracle o({9, 9}, [](PointView p) { return 0.3 * (std::abs(double(p[0]) - 2.0) + std::abs(double(p[1]) - 7.0)); },
                        1.0);
  const std::vector<Eigen::VectorXd> cands{vec({5.0, 5.0}), vec({2.5, 6.5}), vec({2.2, 7.0}), vec({3.0, 6.0})};
  int ok = 0;
  for (int r = 0; r < 200; ++r) {
    Rng rng = seed_stream(8, {std::int64_t{r}});
    Sampler s(o, rng);
    const auto best = finalist_pgs(s, cands, Guarantee::pgs(0.2, 0.05));
    const double v = lovasz::lovasz_extension(best, o.dims(), [&](PointView p) { return o.value(p); });
    ok += v <= 0.06 + 0.2;  // best candidate (2.2, 7) has extension value 0.06
  }
  EXPECT_GE(ok, 190);
}

TEST(AcceleratedVaidya, NoiselessIsExactAndBoxesNest) {
  for (int r = 0; r < 5; ++r) {
    Rng rng = seed_stream(9, {std::int64_t{r}});
    auto model = bench::SeparableModel::random(2, 40, rng, 0.0);
    auto o = model.oracle();
    Sampler s(o, rng);
    AcceleratedTrace trace;
    const auto x = accelerated_vaidya_iz(s, Guarantee::pcs_iz(0.05, 0.1), model.lipschitz(), {}, &trace);
    EXPECT_EQ(x, model.optimum);
    ASSERT_EQ(trace.box_lo.size(), trace.box_hi.size());
    for (std::size_t e = 1; e < trace.box_lo.size(); ++e) {
      EXPECT_DOUBLE_EQ(trace.epoch_epsilons[e], trace.epoch_epsilons[e - 1] / 2.0);
      for (std::size_t i = 0; i < 2; ++i) {
        // each box sits around the previous epoch's answer
        EXPECT_LE(trace.box_lo[e][i], trace.epoch_solutions[e - 1][i]);
        EXPECT_GE(trace.box_hi[e][i], trace.epoch_solutions[e - 1][i]);
        EXPECT_LE(trace.box_hi[e][i] - trace.box_lo[e][i], trace.box_hi[e - 1][i] - trace.box_lo[e - 1][i]);
      }
    }
  }
}

TEST(AcceleratedVaidya, NoisyCorrectSelection) {
  int ok = 0;
  for (int r = 0; r < 40; ++r) {
    Rng rng = seed_stream(10, {std::int64_t{r}});
    auto model = bench::SeparableModel::random(2, 8, rng, 0.01);
    auto o = model.oracle();
    Sampler s(o, rng);
    ok += accelerated_vaidya_iz(s, Guarantee::pcs_iz(0.05, 0.05), model.lipschitz()) == model.optimum;
  }
  EXPECT_GE(ok, 38);
}

}  // namespace

#include <gtest/gtest.h>

#include <cmath>

#include "cso/cut_engine.hpp"
#include "cso/errors.hpp"
#include "cso/lp.hpp"
#include "cso/polytope.hpp"

namespace {

using namespace cso;
using namespace cso::cutplane;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Polytope square(double lo, double hi) { return Polytope::box(vec({lo, lo}), vec({hi, hi})); }

TEST(SupportLp, Examples) {
  const auto p = square(1.0, 3.0);
  auto r = support_lp(p, vec({1.0, 0.0}));
  ASSERT_EQ(r.status, lp::LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 3.0, 1e-12);
  r = support_lp(p, vec({0.0, 0.0}));
  ASSERT_EQ(r.status, lp::LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 0.0, 1e-12);

  Polytope triangle(2);  // x >= 0, y >= 0, x + y <= 1
  triangle.add(vec({1.0, 0.0}), 0.0, RowOrigin::kBox);
  triangle.add(vec({0.0, 1.0}), 0.0, RowOrigin::kBox);
  triangle.add(vec({-1.0, -1.0}), -1.0, RowOrigin::kBox);
  r = support_lp(triangle, vec({1.0, 1.0}));
  ASSERT_EQ(r.status, lp::LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_TRUE(triangle.contains(r.x));
}

TEST(Lp, InfeasibleAndUnbounded) {
  Eigen::MatrixXd a(2, 1);
  a << 1.0, -1.0;
  EXPECT_EQ(lp::maximize(a, vec({1.0, 0.0}), vec({1.0})).status, lp::LpStatus::kInfeasible);  // x >= 1, x <= 0
  Eigen::MatrixXd half(1, 1);
  half << 1.0;
  EXPECT_EQ(lp::maximize(half, vec({0.0}), vec({1.0})).status, lp::LpStatus::kUnbounded);
}

TEST(Lp, AgreesWithVertexEnumerationOnRandomPolygons) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    // polygon through random tangent lines of the unit circle, objective max over its vertices
    const int m = 5 + static_cast<int>(rng() % 5);
    Polytope p(2);
    for (int i = 0; i < m; ++i) {
      const double t = 2.0 * 3.141592653589793 * (i + rng.uniform01() * 0.5) / m;
      p.add(vec({-std::cos(t), -std::sin(t)}), -1.0, RowOrigin::kBox);
    }
    const auto c = vec({rng.uniform01() - 0.5, rng.uniform01() - 0.5});
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        Eigen::Matrix2d a;
        a.row(0) = p.row(i).normal.transpose();
        a.row(1) = p.row(j).normal.transpose();
        if (std::abs(a.determinant()) < 1e-12) continue;
        const Eigen::Vector2d v = a.inverse() * Eigen::Vector2d(p.row(i).offset, p.row(j).offset);
        if (p.contains(v, 1e-9)) best = std::max(best, c.dot(v));
      }
    }
    const auto r = support_lp(p, c);
    ASSERT_EQ(r.status, lp::LpStatus::kOptimal);
    ASSERT_NEAR(r.value, best, 1e-9);
  }
}

TEST(OutOfBoxCut, Examples) {
  const std::vector<std::int64_t> dims{5, 5};
  EXPECT_FALSE(out_of_box_cut(vec({3.0, 3.0}), dims));
  EXPECT_FALSE(out_of_box_cut(vec({1.0, 5.0}), dims));
  EXPECT_EQ(*out_of_box_cut(vec({0.5, 3.0}), dims), vec({1.0, 0.0}));
  EXPECT_EQ(*out_of_box_cut(vec({3.0, 5.5}), dims), vec({0.0, -1.0}));
  // lowest violated index wins
  EXPECT_EQ(*out_of_box_cut(vec({6.0, 0.0}), dims), vec({-1.0, 0.0}));
}

TEST(OutOfBoxCut, RowKeepsTheWholeBox) {
  Rng rng(2);
  const std::vector<std::int64_t> dims{4, 7, 3};
  for (int k = 0; k < 200; ++k) {
    Eigen::VectorXd z(3);
    for (int i = 0; i < 3; ++i) z[i] = -2.0 + 12.0 * rng.uniform01();
    const auto a = out_of_box_cut(z, dims);
    if (!a) continue;
    for (std::int64_t i = 1; i <= 4; ++i) {
      for (std::int64_t j = 1; j <= 7; ++j) {
        for (std::int64_t l = 1; l <= 3; ++l) ASSERT_GE(a->dot(vec({double(i), double(j), double(l)})), a->dot(z));
      }
    }
  }
}

TEST(Centers, BoxCenter) {
  const auto p = square(1.0, 3.0);
  EXPECT_LT((analytic_center(p, vec({1.2, 2.9})) - vec({2.0, 2.0})).norm(), 1e-8);
  EXPECT_LT((volumetric_center(p, vec({1.2, 2.9})) - vec({2.0, 2.0})).norm(), 1e-8);
}

TEST(Centers, AnalyticCenterAfterCut) {
  auto p = square(0.0, 1.0);
  p.add(vec({-1.0, 0.0}), -0.5, RowOrigin::kCut);  // x1 <= 0.5
  const auto c = analytic_center(p, vec({0.25, 0.25}));
  EXPECT_NEAR(c[0], (3.0 - std::sqrt(3.0)) / 6.0, 1e-9);
  EXPECT_NEAR(c[0], 0.2113248654051871, 1e-9);
  EXPECT_NEAR(c[1], 0.5, 1e-9);
}

TEST(Centers, DuplicatedRowShiftsBothCenters) {
  // [0, 1] with x <= 1 twice: -ln x - 2 ln(1 - x) is minimized at 1/3, and
  // 0.5 ln(1/x^2 + 2/(1-x)^2) at 0.4424933340244421 (root of its derivative).
  Polytope p(1);
  p.add(vec({1.0}), 0.0, RowOrigin::kBox);
  p.add(vec({-1.0}), -1.0, RowOrigin::kBox);
  p.add(vec({-1.0}), -1.0, RowOrigin::kCut);
  EXPECT_NEAR(analytic_center(p, vec({0.9}))[0], 1.0 / 3.0, 1e-7);
  EXPECT_NEAR(volumetric_center(p, vec({0.9}))[0], 0.4424933340244421, 1e-7);
}

TEST(Barriers, DerivativesMatchFiniteDifferences) {
  Rng rng(3);
  auto p = square(0.0, 1.0);
  p.add(vec({-1.0, -2.0}), -2.0, RowOrigin::kCut);
  p.add(vec({2.0, -1.0}), -0.5, RowOrigin::kCut);
  for (auto eval : {&log_barrier, &volumetric_barrier}) {
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd x(2);
      do {
        x = vec({rng.uniform01(), rng.uniform01()});
      } while (!p.strictly_contains(x) || p.slacks(x).minCoeff() < 0.05);
      const auto e = eval(p, x);
      const double h = 1e-6;
      for (int i = 0; i < 2; ++i) {
        const Eigen::VectorXd dx = h * Eigen::VectorXd::Unit(2, i);
        const auto plus = eval(p, x + dx);
        const auto minus = eval(p, x - dx);
        ASSERT_NEAR(e.gradient[i], (plus.value - minus.value) / (2 * h), 1e-5 * (1 + std::abs(e.gradient[i])));
        const Eigen::VectorXd fd = (plus.gradient - minus.gradient) / (2 * h);
        for (int j = 0; j < 2; ++j) ASSERT_NEAR(e.hessian(i, j), fd[j], 1e-4 * (1 + e.hessian.norm()));
      }
    }
  }
}

TEST(Barriers, LeverageSumsToDimension) {
  auto p = square(0.0, 1.0);
  p.add(vec({-1.0, -1.0}), -1.5, RowOrigin::kCut);
  const auto e = log_barrier(p, vec({0.3, 0.4}));
  EXPECT_NEAR(e.leverage.sum(), 2.0, 1e-10);
  EXPECT_TRUE((e.leverage.array() > 0.0).all());
}

TEST(Barriers, OutsideThrows) {
  const auto p = square(0.0, 1.0);
  EXPECT_THROW(log_barrier(p, vec({1.5, 0.5})), NumericFailure);
}

TEST(InteriorPoint, EmptyAndNonEmpty) {
  Polytope empty(1);
  empty.add(vec({1.0}), 1.0, RowOrigin::kBox);
  empty.add(vec({-1.0}), 0.0, RowOrigin::kBox);
  EXPECT_FALSE(interior_point(empty));
  Polytope flat(1);  // the single point x = 0
  flat.add(vec({1.0}), 0.0, RowOrigin::kBox);
  flat.add(vec({-1.0}), 0.0, RowOrigin::kBox);
  EXPECT_FALSE(interior_point(flat));
  const auto p = square(2.0, 3.0);
  const auto x = interior_point(p);
  ASSERT_TRUE(x);
  EXPECT_TRUE(p.strictly_contains(*x));
}

TEST(VolumeBound, CoversTheBox) {
  const auto p = square(0.0, 1.0);
  EXPECT_GE(ellipsoid_volume_bound(p, vec({0.5, 0.5})), 1.0);
  auto cut = p;
  cut.add(vec({-1.0, 0.0}), -0.5, RowOrigin::kCut);
  EXPECT_GE(ellipsoid_volume_bound(cut, analytic_center(cut, vec({0.25, 0.5}))), 0.5);
}

TEST(HitAndRun, CentroidOfSquare) {
  Rng rng(4);
  const auto c = hit_and_run_centroid(square(0.0, 1.0), vec({0.1, 0.9}), rng, 20000, 200);
  EXPECT_NEAR(c[0], 0.5, 0.02);
  EXPECT_NEAR(c[1], 0.5, 0.02);
}

class EngineKinds : public ::testing::TestWithParam<EngineKind> {};

TEST_P(EngineKinds, CentralCutThroughTheCenter) {
  CutEngine engine(square(1.0, 5.0), GetParam(), 7);
  Rng rng(5);
  for (int k = 0; k < 15; ++k) {
    const Eigen::VectorXd z = engine.center();
    ASSERT_TRUE(engine.polytope().strictly_contains(z));
    const Eigen::VectorXd g = vec({rng.uniform01() - 0.5, rng.uniform01() - 0.5});
    const auto id = engine.add_central_cut(g);
    const auto idx = engine.polytope().find(id);
    ASSERT_TRUE(idx);
    const auto& row = engine.polytope().row(*idx);
    EXPECT_NEAR(row.slack(z), 0.0, 1e-9);
    EXPECT_EQ(row.query, z);
    // the new center lies in the kept half {g.(y - z) <= 0}
    EXPECT_LT(g.dot(engine.center() - z), 0.0);
    EXPECT_TRUE(engine.polytope().strictly_contains(engine.center()));
  }
}

INSTANTIATE_TEST_SUITE_P(All, EngineKinds,
                         ::testing::Values(EngineKind::kVaidya, EngineKind::kAnalyticCenter, EngineKind::kRandomWalk));

TEST(CutEngine, BoxRowsAreNeverRemoved) {
  CutEngine engine(square(0.0, 1.0), EngineKind::kVaidya);
  engine.add_row(vec({-1.0, 0.0}), -1e6);
  EXPECT_FALSE(engine.removable_row());
  const auto step = engine_step(engine, [](const Eigen::VectorXd&) { return std::optional<Eigen::VectorXd>(); });
  EXPECT_EQ(step.action, EngineAction::kCenterOnly);
}

TEST(CutEngine, EngineStepAddsThenRemoves) {
  CutEngine engine(square(0.0, 1.0), EngineKind::kVaidya);
  int added = 0;
  int removed = 0;
  Eigen::VectorXd target = vec({0.9, 0.8});
  for (int k = 0; k < 60; ++k) {
    const auto out = engine_step(engine, [&](const Eigen::VectorXd& z) {
      return std::optional<Eigen::VectorXd>(z - target);
    });
    added += out.action == EngineAction::kAdded;
    removed += out.action == EngineAction::kRemoved;
    ASSERT_TRUE(engine.polytope().contains(target));
  }
  EXPECT_GT(added, 0);
  EXPECT_LT((engine.center() - target).norm(), 0.05);
  EXPECT_LE(static_cast<int>(engine.polytope().size()), 4 + added - removed);
}

}  // namespace

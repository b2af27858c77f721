#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>

#include "cso/polytope.hpp"
#include "cso/rng.hpp"

namespace cso::cutplane {

struct BarrierEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  Eigen::VectorXd leverage;  // a_i^T H^{-1} a_i / s_i^2 with H the log-barrier Hessian
};

/// -sum log s_i. Throws NumericFailure outside the interior.
BarrierEval log_barrier(const Polytope& p, const Eigen::VectorXd& x);

/// 0.5 log det(sum a_i a_i^T / s_i^2) with its exact Hessian A_s^T (3 Sigma - 2 P*P) A_s.
BarrierEval volumetric_barrier(const Polytope& p, const Eigen::VectorXd& x);

struct NewtonOptions {
  double tolerance = 1e-8;  // on the Newton decrement
  int max_iterations = 200;
};

/// Minimizers of the barriers by damped Newton from a strictly feasible start.
Eigen::VectorXd analytic_center(const Polytope& p, Eigen::VectorXd start, const NewtonOptions& opts = {});
Eigen::VectorXd volumetric_center(const Polytope& p, Eigen::VectorXd start, const NewtonOptions& opts = {});

/// Strictly feasible point, or nothing when the interior is empty (LP on the scaled slack).
std::optional<Eigen::VectorXd> interior_point(const Polytope& p);

/// Upper bound on vol(P) from the Dikin ellipsoid at the analytic center x_ac, scaled by m + 2 sqrt(m).
double ellipsoid_volume_bound(const Polytope& p, const Eigen::VectorXd& x_ac);

/// Mean of `samples` hit-and-run points after `burn_in` steps.
Eigen::VectorXd hit_and_run_centroid(const Polytope& p, Eigen::VectorXd start, Rng& rng, int samples, int burn_in);

enum class EngineKind { kVaidya, kAnalyticCenter, kRandomWalk };

enum class EngineAction { kAdded, kRemoved, kCenterOnly };

class CutEngine {
 public:
  static constexpr double kRemovalLeverage = 1e-3;

  CutEngine(Polytope polytope, EngineKind kind, std::uint64_t seed = 0);

  const Polytope& polytope() const { return polytope_; }
  const Eigen::VectorXd& center() const { return center_; }
  EngineKind kind() const { return kind_; }
  bool fell_back() const { return fell_back_; }

  /// Cut row whose leverage at the center is below the removal threshold (Vaidya only).
  std::optional<std::size_t> removable_row() const;

  /// Keeps {y : g.(y - z) <= 0} through the current center z and re-centers. Returns the row id.
  std::uint64_t add_central_cut(const Eigen::VectorXd& g);
  /// Adds a.y >= b (box repair rows) and re-centers. Returns the row id.
  std::uint64_t add_row(const Eigen::VectorXd& a, double b);
  void remove_row(std::size_t index);

 private:
  void recenter(Eigen::VectorXd start);
  Eigen::VectorXd nudge_inside(const Eigen::VectorXd& a) const;

  Polytope polytope_;
  EngineKind kind_;
  Rng rng_;
  Eigen::VectorXd center_;
  bool fell_back_ = false;
};

struct StepOutcome {
  EngineAction action = EngineAction::kCenterOnly;
  Eigen::VectorXd query;       // center where the oracle ran (kAdded)
  std::uint64_t row_id = 0;    // row added or removed
};

/// One bookkeeping step: drop a low-leverage cut if there is one, otherwise ask
/// `separation` for a vector at the center and cut through it. A separation result
/// of nothing leaves the polytope unchanged.
StepOutcome engine_step(CutEngine& engine,
                        const std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>& separation);

}  // namespace cso::cutplane

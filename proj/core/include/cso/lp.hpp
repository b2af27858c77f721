#pragma once

#include <Eigen/Dense>

namespace cso::lp {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// max c.x subject to A x >= b with x free. Dense two-phase simplex with Bland's rule.
LpResult maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace cso::lp

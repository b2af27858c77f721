#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cso/cut_engine.hpp"
#include "cso/oracle.hpp"
#include "cso/polytope.hpp"

namespace cso::dimred {

/// x = offset + sum_j columns[j] * t_j, integral for integral t.
struct AffineSubgrid {
  GridPoint offset;
  std::vector<GridPoint> columns;

  static AffineSubgrid identity(int d);
  int dim() const { return static_cast<int>(columns.size()); }
  int ambient_dim() const { return static_cast<int>(offset.size()); }
  GridPoint map(PointView t) const;
  Eigen::VectorXd map_real(const Eigen::VectorXd& t) const;
  /// Pulls an ambient gradient back to subgrid coordinates.
  Eigen::VectorXd pull_back(const Eigen::VectorXd& g) const;
};

enum class HyperplaneKind { kHyperplane, kEmpty, kTooBig };

struct HyperplaneResult {
  HyperplaneKind kind = HyperplaneKind::kTooBig;
  GridPoint normal;   // primitive integer vector
  std::int64_t level = 0;
};

/// Tolerance used when rounding LP bounds to integer ranges; borderline points count as inside.
inline constexpr double kIntegralTol = 1e-7;

/// Looks for an integer hyperplane holding every integral point of P, scanning the
/// directions of an LLL-reduced basis shaped by the log-barrier Hessian at the analytic
/// center. When no direction has a single integer slice and P holds few integral points,
/// those points are enumerated and their affine hull decides.
HyperplaneResult find_integral_hyperplane(const cutplane::Polytope& p);

struct Projection {
  cutplane::Polytope polytope;
  AffineSubgrid embed;
};

/// Restricts P to {v.t = k} through a unimodular completion of v and composes the embedding.
Projection project_polytope(const cutplane::Polytope& p, const GridPoint& v, std::int64_t k,
                            const AffineSubgrid& embed);

struct DimredOptions {
  cutplane::EngineKind engine = cutplane::EngineKind::kVaidya;
  double so_relax_factor = 1.0;  // separation oracles run at so_relax_factor * eps / 4
};

struct DimredTrace {
  std::vector<int> dimensions;  // dimension at the start of each outer round
  std::vector<int> cuts_per_dimension;
  int so_calls = 0;
  std::int64_t so_budget = 0;
  bool ended_empty = false;
  bool zero_gradient_exit = false;
};

std::int64_t so_call_budget(int d, double n);

/// Per-call confidence level for the k-th separation call (k >= 1) under a call budget T:
/// the first T calls get delta / (8T); block j >= 1 of 2^j T further calls gets delta / (8T 4^j).
double so_call_level(std::int64_t k, std::int64_t budget, double delta);

GridPoint dimension_reduction_solve(Sampler& sampler, const Guarantee& guarantee, const DimredOptions& options = {},
                                    DimredTrace* trace = nullptr);

}  // namespace cso::dimred

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cso/oracle.hpp"

namespace cso::lovasz {

/// Coordinate order by nonincreasing fractional part; equal parts keep ascending index.
std::vector<int> consistent_permutation(const Eigen::VectorXd& frac);

/// Neighboring chain S^0 ⊂ ... ⊂ S^d of x inside the cell based at floor(x).
/// Coordinates of size 1 never step, so their chain entries repeat.
struct Chain {
  GridPoint base;
  Eigen::VectorXd frac;           // x - base
  std::vector<int> order;         // order[i] is the coordinate raised at step i + 1
  std::vector<GridPoint> points;  // d + 1 points, points[0] == base
};

Chain neighbor_chain(const Eigen::VectorXd& x, std::span<const std::int64_t> dims);

/// Interpolated value f(S^0) + sum_i (f(S^i) - f(S^{i-1})) * frac_{order[i]}.
double lovasz_value(const Chain& chain, std::span<const double> chain_values);

/// g_{order[i]} = f(S^{i+1}) - f(S^i).
Eigen::VectorXd lovasz_subgradient(const Chain& chain, std::span<const double> chain_values);

/// Exact extension of a deterministic grid function.
double lovasz_extension(const Eigen::VectorXd& x, std::span<const std::int64_t> dims,
                        const std::function<double(PointView)>& f);

struct SubgradientEstimate {
  Chain chain;
  std::vector<SampleStats> stats;  // one per chain point; repeated points share a draw set
  Eigen::VectorXd gradient;
  double value = 0.0;
};

/// Separating vector from n fresh draws per distinct chain point; both differences
/// touching a chain point use the same empirical mean.
SubgradientEstimate stochastic_subgradient(Sampler& sampler, const Eigen::VectorXd& x, std::uint64_t n);

/// Draws per chain point so the stochastic subgradient is an (epsilon, delta) separation
/// oracle: ceil(4 d N^2 sigma^2 / epsilon^2 * ln(2 / delta)), at least 1.
std::uint64_t so_sample_count(int d, double n, double sigma, double epsilon, double delta);

/// Best chain point of xbar, each sampled to half-width epsilon / 4 at level 1 - delta / 4.
/// Draws already present in `book` are reused and new ones are written back.
GridPoint round_to_integer(Sampler& sampler, const Eigen::VectorXd& xbar, const Guarantee& guarantee,
                           SampleBook* book = nullptr);

}  // namespace cso::lovasz

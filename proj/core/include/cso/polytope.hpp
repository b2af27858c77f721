#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cso/lp.hpp"

namespace cso::cutplane {

enum class RowOrigin { kBox, kCut };

/// Row a.x >= b.
struct Halfspace {
  Eigen::VectorXd normal;
  double offset = 0.0;
  RowOrigin origin = RowOrigin::kBox;
  Eigen::VectorXd query;  // where the separation oracle was evaluated (cuts only)
  std::uint64_t id = 0;

  double slack(const Eigen::VectorXd& x) const { return normal.dot(x) - offset; }
};

class Polytope {
 public:
  explicit Polytope(int dim = 0) : dim_(dim) {}

  /// {lo <= x <= hi}, one pair of rows per coordinate.
  static Polytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

  int dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<Halfspace>& rows() const { return rows_; }
  const Halfspace& row(std::size_t i) const { return rows_[i]; }

  std::uint64_t add(Eigen::VectorXd normal, double offset, RowOrigin origin,
                    Eigen::VectorXd query = Eigen::VectorXd());
  void remove(std::size_t index);
  /// Index of the row with this id, if still present.
  std::optional<std::size_t> find(std::uint64_t id) const;

  Eigen::MatrixXd normals() const;
  Eigen::VectorXd offsets() const;
  Eigen::VectorXd slacks(const Eigen::VectorXd& x) const;
  bool strictly_contains(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;

 private:
  int dim_;
  std::vector<Halfspace> rows_;
  std::uint64_t next_id_ = 1;
};

/// max v.x over P.
lp::LpResult support_lp(const Polytope& p, const Eigen::VectorXd& v);

/// Normal a of a violated box constraint (lowest index): +e_i if z_i < 1, -e_i if z_i > N_i.
/// The row a.y >= a.z keeps the whole box. Empty when z is inside the box.
std::optional<Eigen::VectorXd> out_of_box_cut(const Eigen::VectorXd& z, std::span<const std::int64_t> dims);

}  // namespace cso::cutplane

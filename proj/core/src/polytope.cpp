#include "cso/polytope.hpp"

#include <stdexcept>

namespace cso::cutplane {

Polytope Polytope::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box bounds differ in length");
  const int d = static_cast<int>(lo.size());
  Polytope p(d);
  for (int i = 0; i < d; ++i) {
    if (!(lo[i] < hi[i])) throw std::invalid_argument("box must have positive width in every coordinate");
    Eigen::VectorXd e = Eigen::VectorXd::Unit(d, i);
    p.add(e, lo[i], RowOrigin::kBox);
    p.add(-e, -hi[i], RowOrigin::kBox);
  }
  return p;
}

std::uint64_t Polytope::add(Eigen::VectorXd normal, double offset, RowOrigin origin, Eigen::VectorXd query) {
  if (normal.size() != dim_) throw std::invalid_argument("row normal has wrong dimension");
  const auto id = next_id_++;
  rows_.push_back({std::move(normal), offset, origin, std::move(query), id});
  return id;
}

void Polytope::remove(std::size_t index) {
  if (index >= rows_.size()) throw std::out_of_range("Polytope::remove");
  rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(index));
}

std::optional<std::size_t> Polytope::find(std::uint64_t id) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].id == id) return i;
  }
  return std::nullopt;
}

Eigen::MatrixXd Polytope::normals() const {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows_.size()), dim_);
  for (std::size_t i = 0; i < rows_.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = rows_[i].normal.transpose();
  return a;
}

Eigen::VectorXd Polytope::offsets() const {
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) b[static_cast<Eigen::Index>(i)] = rows_[i].offset;
  return b;
}

Eigen::VectorXd Polytope::slacks(const Eigen::VectorXd& x) const { return normals() * x - offsets(); }

bool Polytope::strictly_contains(const Eigen::VectorXd& x) const {
  for (const auto& r : rows_) {
    if (!(r.slack(x) > 0.0)) return false;
  }
  return true;
}

bool Polytope::contains(const Eigen::VectorXd& x, double tol) const {
  for (const auto& r : rows_) {
    if (r.slack(x) < -tol * std::max(1.0, r.normal.norm())) return false;
  }
  return true;
}

lp::LpResult support_lp(const Polytope& p, const Eigen::VectorXd& v) {
  if (v.size() != p.dim()) throw std::invalid_argument("support_lp: direction has wrong dimension");
  return lp::maximize(p.normals(), p.offsets(), v);
}

std::optional<Eigen::VectorXd> out_of_box_cut(const Eigen::VectorXd& z, std::span<const std::int64_t> dims) {
  if (static_cast<std::size_t>(z.size()) != dims.size()) throw std::invalid_argument("out_of_box_cut: dimension mismatch");
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] < 1.0) return Eigen::VectorXd::Unit(z.size(), i);
    if (z[i] > static_cast<double>(dims[static_cast<std::size_t>(i)])) return -Eigen::VectorXd::Unit(z.size(), i);
  }
  return std::nullopt;
}

}  // namespace cso::cutplane

#include "cso/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cso::lp {

namespace {

constexpr double kTol = 1e-10;

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>((rows + 1) * (cols + 1)), 0.0) {}

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r * (cols_ + 1) + c)]; }
  double& rhs(int r) { return at(r, cols_); }
  // Row `rows_` holds reduced costs of the objective being minimized.
  double& cost(int c) { return at(rows_, c); }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

// Runs the simplex on the current cost row over columns [0, usable). Returns false if unbounded.
bool run_simplex(Tableau& t, std::vector<int>& basis, int usable) {
  const int max_pivots = 50'000;
  for (int it = 0; it < max_pivots; ++it) {
    int enter = -1;
    for (int c = 0; c < usable; ++c) {
      if (t.cost(c) < -kTol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kTol) continue;
      const double ratio = t.rhs(r) / a;
      if (leave < 0 || ratio < best_ratio - kTol) {
        best_ratio = ratio;
        leave = r;
      } else if (ratio <= best_ratio + kTol && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)]) {
        best_ratio = std::min(best_ratio, ratio);
        leave = r;
      }
    }
    if (leave < 0) return false;
    t.pivot(leave, enter);
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  throw std::runtime_error("simplex did not terminate");
}

}  // namespace

LpResult maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) throw std::invalid_argument("lp::maximize: dimension mismatch");

  // Columns: u (n), w (n), slack (m), artificial (m). x = u - w, A u - A w - s = b.
  const int n_struct = 2 * n + m;
  const int n_cols = n_struct + m;
  Tableau t(m, n_cols);
  std::vector<int> basis(static_cast<std::size_t>(m));
  std::vector<bool> needs_art(static_cast<std::size_t>(m), false);

  for (int r = 0; r < m; ++r) {
    const double norm = a.row(r).norm();
    const double scale = norm > 0.0 ? 1.0 / norm : 1.0;
    double rhs = b[r] * scale;
    const double sign = rhs > 0.0 ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) {
      t.at(r, j) = sign * scale * a(r, j);
      t.at(r, n + j) = -sign * scale * a(r, j);
    }
    t.at(r, 2 * n + r) = -sign;
    t.rhs(r) = sign * rhs;
    if (sign > 0.0) {
      needs_art[static_cast<std::size_t>(r)] = true;
      t.at(r, n_struct + r) = 1.0;
      basis[static_cast<std::size_t>(r)] = n_struct + r;
    } else {
      basis[static_cast<std::size_t>(r)] = 2 * n + r;
    }
  }

  // Phase 1: minimize the sum of artificials.
  for (int r = 0; r < m; ++r) {
    if (!needs_art[static_cast<std::size_t>(r)]) continue;
    for (int col = 0; col <= n_cols; ++col) {
      if (col >= n_struct && col < n_cols) continue;
      t.cost(col) -= t.at(r, col);
    }
  }
  run_simplex(t, basis, n_cols);
  if (-t.rhs(m) > 1e-8) return {LpStatus::kInfeasible, 0.0, {}};

  // Drive zero-level artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (basis[static_cast<std::size_t>(r)] < n_struct) continue;
    for (int col = 0; col < n_struct; ++col) {
      if (std::abs(t.at(r, col)) > 1e-9) {
        t.pivot(r, col);
        basis[static_cast<std::size_t>(r)] = col;
        break;
      }
    }
  }

  // Phase 2: minimize -c.u + c.w.
  for (int col = 0; col <= n_cols; ++col) t.cost(col) = 0.0;
  for (int j = 0; j < n; ++j) {
    t.cost(j) = -c[j];
    t.cost(n + j) = c[j];
  }
  for (int r = 0; r < m; ++r) {
    const int bv = basis[static_cast<std::size_t>(r)];
    const double f = t.cost(bv);
    if (f == 0.0) continue;
    for (int col = 0; col <= n_cols; ++col) t.cost(col) -= f * t.at(r, col);
  }
  if (!run_simplex(t, basis, n_struct)) return {LpStatus::kUnbounded, std::numeric_limits<double>::infinity(), {}};

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    const int bv = basis[static_cast<std::size_t>(r)];
    if (bv < n) x[bv] += t.rhs(r);
    else if (bv < 2 * n) x[bv - n] -= t.rhs(r);
  }
  return {LpStatus::kOptimal, c.dot(x), x};
}

}  // namespace cso::lp

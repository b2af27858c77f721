#include "cso/lattice.hpp"

#include <limits>
#include <numeric>

namespace cso::lattice {

namespace {

std::int64_t checked(__int128 x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("unimodular completion overflowed 64-bit integers");
  }
  return static_cast<std::int64_t>(x);
}

}  // namespace

std::int64_t gcd_all(const std::vector<std::int64_t>& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  return g;
}

std::vector<std::vector<std::int64_t>> unimodular_completion(const std::vector<std::int64_t>& v) {
  const std::size_t d = v.size();
  if (d == 0 || gcd_all(v) == 0) throw std::invalid_argument("unimodular_completion: zero vector");
  if (gcd_all(v) != 1) throw std::invalid_argument("unimodular_completion: vector is not primitive");
  std::vector<std::vector<std::int64_t>> cols(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < d; ++i) cols[i][i] = 1;
  std::vector<std::int64_t> w = v;  // w = v^T U, kept in sync with column operations

  // Euclid on the entries of w via column operations until one nonzero remains.
  for (;;) {
    std::size_t pivot = d;
    for (std::size_t j = 0; j < d; ++j) {
      if (w[j] != 0 && (pivot == d || std::abs(w[j]) < std::abs(w[pivot]))) pivot = j;
    }
    bool others = false;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == pivot || w[j] == 0) continue;
      others = true;
      const std::int64_t q = w[j] / w[pivot];
      w[j] -= q * w[pivot];
      for (std::size_t i = 0; i < d; ++i) {
        cols[j][i] = checked(static_cast<__int128>(cols[j][i]) - static_cast<__int128>(q) * cols[pivot][i]);
      }
    }
    if (!others) {
      std::swap(cols[0], cols[pivot]);
      std::swap(w[0], w[pivot]);
      if (w[0] < 0) {
        w[0] = -w[0];
        for (auto& x : cols[0]) x = -x;
      }
      return cols;
    }
  }
}

BigInt integer_determinant(const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t n = rows.size();
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("integer_determinant: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) m[i][j] = rows[i][j];
  }
  // Bareiss fraction-free elimination.
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    }
    prev = m[k][k];
  }
  return n == 0 ? BigInt(1) : sign * m[n - 1][n - 1];
}

}  // namespace cso::lattice

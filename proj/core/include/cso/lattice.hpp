#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cso::lattice {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class Scalar>
using Basis = std::vector<std::vector<Scalar>>;  // one lattice vector per entry

template <class Scalar>
struct LllResult {
  Basis<Scalar> basis;
  Basis<Scalar> transform;  // integer entries: basis[i] = sum_j transform[i][j] * input[j]
};

template <class Scalar>
struct GramSchmidt {
  Basis<Scalar> mu;         // mu[i][j] for j < i
  std::vector<Scalar> norm2;  // |b*_i|^2
};

namespace detail {

template <class Scalar>
Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  Scalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double round_nearest(double x) { return std::floor(x + 0.5); }

inline Rational round_nearest(const Rational& x) {
  const Rational shifted = x + Rational(1, 2);
  BigInt q = boost::multiprecision::numerator(shifted) / boost::multiprecision::denominator(shifted);
  if (q * boost::multiprecision::denominator(shifted) > boost::multiprecision::numerator(shifted)) q -= 1;
  return Rational(q);
}

inline bool vanishes(double b, double scale) { return !(b > 1e-12 * scale); }
inline bool vanishes(const Rational& b, const Rational&) { return b == 0; }

}  // namespace detail

template <class Scalar>
GramSchmidt<Scalar> gram_schmidt(const Basis<Scalar>& b) {
  const std::size_t n = b.size();
  GramSchmidt<Scalar> gs;
  gs.mu.assign(n, std::vector<Scalar>(n, Scalar(0)));
  gs.norm2.assign(n, Scalar(0));
  Basis<Scalar> star = b;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      gs.mu[i][j] = detail::dot(b[i], star[j]) / gs.norm2[j];
      for (std::size_t k = 0; k < star[i].size(); ++k) star[i][k] -= gs.mu[i][j] * star[j][k];
    }
    gs.norm2[i] = detail::dot(star[i], star[i]);
    if (detail::vanishes(gs.norm2[i], detail::dot(b[i], b[i]))) {
      throw std::invalid_argument("lll_reduce: basis vectors are linearly dependent");
    }
  }
  return gs;
}

/// LLL reduction with parameter delta in (1/4, 1). Exact for Rational, floating for double.
template <class Scalar>
LllResult<Scalar> lll_reduce(Basis<Scalar> b, Scalar delta) {
  if (!(delta > Scalar(1) / Scalar(4) && delta < Scalar(1))) throw std::invalid_argument("lll_reduce: delta outside (1/4, 1)");
  const std::size_t n = b.size();
  if (n == 0) throw std::invalid_argument("lll_reduce: empty basis");
  for (const auto& v : b) {
    if (v.size() != b[0].size()) throw std::invalid_argument("lll_reduce: ragged basis");
  }
  Basis<Scalar> u(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

  auto gs = gram_schmidt(b);
  std::size_t k = 1;
  std::size_t guard = 0;
  while (k < n) {
    if (++guard > 100000) throw std::runtime_error("lll_reduce: no convergence");
    for (std::size_t jj = k; jj-- > 0;) {
      const Scalar q = detail::round_nearest(gs.mu[k][jj]);
      if (q == 0) continue;
      for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[jj][t];
      for (std::size_t t = 0; t < n; ++t) u[k][t] -= q * u[jj][t];
      for (std::size_t t = 0; t < jj; ++t) gs.mu[k][t] -= q * gs.mu[jj][t];
      gs.mu[k][jj] -= q;
    }
    const Scalar lhs = gs.norm2[k];
    const Scalar rhs = (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.norm2[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(u[k], u[k - 1]);
      gs = gram_schmidt(b);
      k = k > 1 ? k - 1 : 1;
    }
  }
  return {std::move(b), std::move(u)};
}

/// Integer d x d matrix U (stored by columns) with det U = +-1 and v^T U = (1, 0, ..., 0).
/// Needs v primitive.
std::vector<std::vector<std::int64_t>> unimodular_completion(const std::vector<std::int64_t>& v);

std::int64_t gcd_all(const std::vector<std::int64_t>& v);

/// Exact determinant of an integer matrix given by rows.
BigInt integer_determinant(const std::vector<std::vector<std::int64_t>>& rows);

}  // namespace cso::lattice

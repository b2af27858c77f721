#pragma once

#include <cmath>
#include <vector>

#include "cso/oracle.hpp"
#include "cso/rng.hpp"

namespace cso::test_support {

/// f(x) = sum_i a_i (x_i - s_i)^2 + sum_{i<j} b_ij (x_i - x_j - t_ij)^2: convex in every
/// coordinate and every pairwise difference, hence L-natural convex on the grid.
struct QuadraticLnat {
  int d = 0;
  std::vector<double> a, s;
  std::vector<std::vector<double>> b, t;

  static QuadraticLnat random(int d, double n, Rng& rng) {
    QuadraticLnat q;
    q.d = d;
    q.b.assign(d, std::vector<double>(d, 0.0));
    q.t.assign(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i) {
      q.a.push_back(0.1 + rng.uniform01());
      q.s.push_back(1.0 + (n - 1.0) * rng.uniform01());
      for (int j = i + 1; j < d; ++j) {
        q.b[i][j] = 0.5 * rng.uniform01();
        q.t[i][j] = (rng.uniform01() - 0.5) * n / 2.0;
      }
    }
    return q;
  }

  double operator()(PointView x) const {
    double v = 0.0;
    for (int i = 0; i < d; ++i) {
      v += a[i] * std::pow(x[i] - s[i], 2);
      for (int j = i + 1; j < d; ++j) v += b[i][j] * std::pow(x[i] - x[j] - t[i][j], 2);
    }
    return v;
  }
};

}  // namespace cso::test_support

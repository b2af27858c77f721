#include "cso/dimred.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cso/errors.hpp"
#include "cso/lattice.hpp"
#include "cso/lovasz.hpp"
#include "cso/onedim.hpp"
#include "cso/cutplane.hpp"

namespace cso::dimred {

using cutplane::Polytope;
using lattice::Rational;

AffineSubgrid AffineSubgrid::identity(int d) {
  AffineSubgrid e;
  e.offset.assign(static_cast<std::size_t>(d), 0);
  for (int j = 0; j < d; ++j) {
    GridPoint c(static_cast<std::size_t>(d), 0);
    c[static_cast<std::size_t>(j)] = 1;
    e.columns.push_back(std::move(c));
  }
  return e;
}

GridPoint AffineSubgrid::map(PointView t) const {
  if (t.size() != columns.size()) throw std::invalid_argument("AffineSubgrid::map: wrong length");
  GridPoint x = offset;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += columns[j][i] * t[j];
  }
  return x;
}

Eigen::VectorXd AffineSubgrid::map_real(const Eigen::VectorXd& t) const {
  Eigen::VectorXd x(ambient_dim());
  for (int i = 0; i < ambient_dim(); ++i) x[i] = static_cast<double>(offset[static_cast<std::size_t>(i)]);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (int i = 0; i < ambient_dim(); ++i) {
      x[i] += static_cast<double>(columns[j][static_cast<std::size_t>(i)]) * t[static_cast<Eigen::Index>(j)];
    }
  }
  return x;
}

Eigen::VectorXd AffineSubgrid::pull_back(const Eigen::VectorXd& g) const {
  Eigen::VectorXd out(dim());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    double s = 0.0;
    for (int i = 0; i < ambient_dim(); ++i) s += static_cast<double>(columns[j][static_cast<std::size_t>(i)]) * g[i];
    out[static_cast<Eigen::Index>(j)] = s;
  }
  return out;
}

namespace {

Eigen::VectorXd to_real(const GridPoint& v) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r[static_cast<Eigen::Index>(i)] = static_cast<double>(v[i]);
  return r;
}

struct Range {
  bool feasible = false;
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  std::int64_t count() const { return feasible ? std::max<std::int64_t>(0, hi - lo + 1) : 0; }
};

// Integer values taken by u.t over P, widened by the tolerance.
Range integer_range(const Polytope& p, const Eigen::VectorXd& u) {
  const auto up = cutplane::support_lp(p, u);
  if (up.status == lp::LpStatus::kInfeasible) return {};
  const auto down = cutplane::support_lp(p, -u);
  if (up.status != lp::LpStatus::kOptimal || down.status != lp::LpStatus::kOptimal) {
    throw NumericFailure("unbounded polytope in integer_range");
  }
  const double scale = std::max(1.0, u.norm());
  Range r;
  r.feasible = true;
  r.lo = static_cast<std::int64_t>(std::ceil(-down.value - kIntegralTol * scale));
  r.hi = static_cast<std::int64_t>(std::floor(up.value + kIntegralTol * scale));
  return r;
}

Polytope with_level(const Polytope& p, const Eigen::VectorXd& u, std::int64_t k) {
  Polytope q = p;
  const double slack = kIntegralTol * std::max(1.0, u.norm());
  q.add(u, static_cast<double>(k) - slack, cutplane::RowOrigin::kBox);
  q.add(-u, -static_cast<double>(k) - slack, cutplane::RowOrigin::kBox);
  return q;
}

// Integral points of P, visiting the directions in `dirs` (rows of a unimodular matrix).
// Returns false when the node or point budget runs out.
bool enumerate_points(const Polytope& p, const std::vector<GridPoint>& dirs, std::size_t depth,
                      std::vector<std::int64_t>& levels, std::vector<std::vector<std::int64_t>>& out, int& budget) {
  if (--budget < 0) return false;
  if (depth == dirs.size()) {
    out.push_back(levels);
    return out.size() <= 256;
  }
  const Eigen::VectorXd u = to_real(dirs[depth]);
  const auto r = integer_range(p, u);
  for (std::int64_t k = r.lo; r.feasible && k <= r.hi; ++k) {
    levels.push_back(k);
    const bool ok = enumerate_points(with_level(p, u, k), dirs, depth + 1, levels, out, budget);
    levels.pop_back();
    if (!ok) return false;
  }
  return true;
}

// Solves W t = y exactly for the integer point t.
GridPoint solve_unimodular(const std::vector<GridPoint>& w, const std::vector<std::int64_t>& y) {
  const std::size_t n = w.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = w[i][j];
    m[i][n] = y[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (m[piv][c] == 0) ++piv;
    std::swap(m[piv], m[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  GridPoint t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::int64_t>(m[i][n] / m[i][i]);
  return t;
}

// Primitive integer normal of the affine hull of pts when that hull is not full-dimensional.
std::optional<GridPoint> hull_normal(const std::vector<GridPoint>& pts, std::size_t d) {
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Rational> r(d);
    for (std::size_t j = 0; j < d; ++j) r[j] = pts[i][j] - pts[0][j];
    rows.push_back(std::move(r));
  }
  // Reduced row echelon form; track pivot columns.
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < d && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const Rational lead = rows[rank][c];
    for (auto& x : rows[rank]) x /= lead;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const Rational f = rows[r][c];
      for (std::size_t k = 0; k < d; ++k) rows[r][k] -= f * rows[rank][k];
    }
    pivots.push_back(c);
    ++rank;
  }
  if (rank >= d) return std::nullopt;
  std::size_t free_col = 0;
  while (std::find(pivots.begin(), pivots.end(), free_col) != pivots.end()) ++free_col;
  std::vector<Rational> v(d, Rational(0));
  v[free_col] = 1;
  for (std::size_t r = 0; r < rank; ++r) v[pivots[r]] = -rows[r][free_col];
  lattice::BigInt lcm = 1;
  for (const auto& x : v) {
    const auto den = boost::multiprecision::denominator(x);
    lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
  }
  GridPoint out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = static_cast<std::int64_t>(boost::multiprecision::numerator(Rational(v[j] * Rational(lcm))));
  const auto g = lattice::gcd_all(out);
  for (auto& x : out) x /= g;
  return out;
}

std::vector<GridPoint> candidate_directions(const Polytope& p) {
  const int d = p.dim();
  std::vector<GridPoint> identity;
  for (int j = 0; j < d; ++j) {
    GridPoint e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(j)] = 1;
    identity.push_back(std::move(e));
  }
  try {
    auto start = cutplane::interior_point(p);
    if (!start) return identity;
    const Eigen::VectorXd xc = cutplane::analytic_center(p, *start);
    const auto e = cutplane::log_barrier(p, xc);
    // Widths along integer u scale with sqrt(u^T H^{-1} u); reduce the lattice under that form.
    const Eigen::MatrixXd g = e.hessian.inverse();
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) return identity;
    const Eigen::MatrixXd r = llt.matrixU();
    lattice::Basis<double> basis(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d)));
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = r(i, j);
    }
    const auto red = lattice::lll_reduce(basis, 0.75);
    std::vector<GridPoint> dirs;
    for (const auto& row : red.transform) {
      GridPoint u(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::llround(row[static_cast<std::size_t>(i)]));
      dirs.push_back(std::move(u));
    }
    std::vector<std::vector<std::int64_t>> rows(dirs.begin(), dirs.end());
    const auto det = lattice::integer_determinant(rows);
    if (det != 1 && det != -1) return identity;
    return dirs;
  } catch (const std::exception&) {
    return identity;
  }
}

}  // namespace

HyperplaneResult find_integral_hyperplane(const Polytope& p) {
  const int d = p.dim();
  if (d < 1) throw std::invalid_argument("find_integral_hyperplane: zero-dimensional polytope");
  const auto feas = cutplane::support_lp(p, Eigen::VectorXd::Zero(d));
  if (feas.status == lp::LpStatus::kInfeasible) return {HyperplaneKind::kEmpty, {}, 0};

  const auto dirs = candidate_directions(p);
  for (const auto& u : dirs) {
    const auto r = integer_range(p, to_real(u));
    if (r.count() == 0) return {HyperplaneKind::kEmpty, {}, 0};
    if (r.count() == 1) return {HyperplaneKind::kHyperplane, u, r.lo};
  }

  std::vector<std::vector<std::int64_t>> coords;
  std::vector<std::int64_t> levels;
  int budget = 4096;
  if (!enumerate_points(p, dirs, 0, levels, coords, budget)) return {HyperplaneKind::kTooBig, {}, 0};
  if (coords.empty()) return {HyperplaneKind::kEmpty, {}, 0};
  std::vector<GridPoint> pts;
  for (const auto& y : coords) pts.push_back(solve_unimodular(dirs, y));
  if (auto v = hull_normal(pts, static_cast<std::size_t>(d))) {
    std::int64_t k = 0;
    for (int i = 0; i < d; ++i) k += (*v)[static_cast<std::size_t>(i)] * pts[0][static_cast<std::size_t>(i)];
    return {HyperplaneKind::kHyperplane, *v, k};
  }
  return {HyperplaneKind::kTooBig, {}, 0};
}

Projection project_polytope(const Polytope& p, const GridPoint& v, std::int64_t k, const AffineSubgrid& embed) {
  const int d = p.dim();
  if (static_cast<int>(v.size()) != d || embed.dim() != d) throw std::invalid_argument("project_polytope: dimension mismatch");
  if (lattice::gcd_all(v) == 0) throw std::invalid_argument("project_polytope: zero normal");
  if (d < 2) throw std::invalid_argument("project_polytope: needs at least two dimensions");
  const auto u = lattice::unimodular_completion(v);  // v^T u[0] = 1, v^T u[j] = 0 otherwise
  GridPoint t0(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) t0[static_cast<std::size_t>(i)] = k * u[0][static_cast<std::size_t>(i)];

  Projection out{Polytope(d - 1), AffineSubgrid{}};
  const Eigen::VectorXd t0r = to_real(t0);
  for (const auto& row : p.rows()) {
    Eigen::VectorXd a(d - 1);
    for (int j = 1; j < d; ++j) a[j - 1] = row.normal.dot(to_real(u[static_cast<std::size_t>(j)]));
    const double b = row.offset - row.normal.dot(t0r);
    if (a.norm() <= 1e-12 * std::max(1.0, row.normal.norm())) {
      // Constant on the hyperplane: either always satisfied or the slice is empty.
      if (b > kIntegralTol * std::max(1.0, row.normal.norm())) {
        out.polytope.add(Eigen::VectorXd::Unit(d - 1, 0), 1.0, row.origin);
        out.polytope.add(-Eigen::VectorXd::Unit(d - 1, 0), 0.0, row.origin);
      }
      continue;
    }
    Eigen::VectorXd q;
    if (row.origin == cutplane::RowOrigin::kCut && row.query.size() == d) q = row.query;
    out.polytope.add(std::move(a), b, row.origin, std::move(q));
  }

  out.embed.offset = embed.map(t0);
  for (int j = 1; j < d; ++j) {
    GridPoint col(static_cast<std::size_t>(embed.ambient_dim()), 0);
    for (int i = 0; i < d; ++i) {
      const auto c = u[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      for (int a = 0; a < embed.ambient_dim(); ++a) {
        col[static_cast<std::size_t>(a)] += embed.columns[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] * c;
      }
    }
    out.embed.columns.push_back(std::move(col));
  }
  return out;
}

std::int64_t so_call_budget(int d, double n) {
  return static_cast<std::int64_t>(std::ceil(10.0 * d * (d + std::log(n))));
}

double so_call_level(std::int64_t k, std::int64_t budget, double delta) {
  if (k < 1 || budget < 1) throw std::invalid_argument("so_call_level: k and budget must be positive");
  const double base = delta / (8.0 * static_cast<double>(budget));
  if (k <= budget) return base;
  int j = 1;
  std::int64_t end = 3 * budget;  // block j covers (T (2^j - 1), T (2^{j+1} - 1)]
  while (k > end) {
    ++j;
    end = 2 * end + budget;
  }
  return base * std::pow(0.25, j);
}

namespace {

struct Solve {
  Sampler& sampler;
  const Guarantee& guarantee;
  const DimredOptions& options;
  DimredTrace* trace;
  SampleBook book;
  std::vector<Eigen::VectorXd> queries;
  int calls = 0;
  std::int64_t budget;
  double n_max;

  // One-dimensional finish on the segment P of the line embed(t).
  void finish_line(const Polytope& p, const AffineSubgrid& embed) {
    const auto r = integer_range(p, Eigen::VectorXd::Ones(1));
    if (r.count() == 0) {
      if (trace) trace->ended_empty = true;
      return;
    }
    GridPoint offset = embed.map(std::vector<std::int64_t>{r.lo - 1});
    AffineRestrictionOracle line(sampler.oracle(), offset, {embed.columns[0]}, {r.count()});
    Sampler inner = sampler.rebind(line);
    const auto s = onedim::enhanced_adaptive_sampling(
        inner, Guarantee::pgs(guarantee.epsilon / 4.0, guarantee.delta / 4.0));
    const GridPoint x = line.lift(std::vector<std::int64_t>{s});
    Eigen::VectorXd xr(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) xr[static_cast<Eigen::Index>(i)] = static_cast<double>(x[i]);
    queries.push_back(xr);
  }

  cutplane::CutEngine make_engine(const Polytope& p) {
    try {
      return cutplane::CutEngine(p, options.engine, sampler.rng().derive(static_cast<std::uint64_t>(p.dim()))());
    } catch (const NumericFailure&) {
    }
    Polytope relaxed(p.dim());
    for (const auto& row : p.rows()) {
      relaxed.add(row.normal, row.offset - kIntegralTol * std::max(1.0, row.normal.norm()), row.origin, row.query);
    }
    try {
      return cutplane::CutEngine(relaxed, options.engine, sampler.rng().derive(static_cast<std::uint64_t>(p.dim()))());
    } catch (const NumericFailure& e) {
      throw SolverFailed(std::string("dimension reduction: cannot center the localization set: ") + e.what());
    }
  }

  // Cuts until a hyperplane or emptiness is certified. Returns false if the solve should stop.
  bool cut_round(Polytope& p, HyperplaneResult& hp, const AffineSubgrid& embed) {
    auto engine = make_engine(p);
    const auto& dims = sampler.oracle().dims();
    const int d = static_cast<int>(dims.size());
    int cuts = 0;
    for (;;) {
      if (calls > 50 * budget) throw SolverFailed("dimension reduction: separation call limit reached");
      if (auto idx = engine.removable_row()) {
        engine.remove_row(*idx);
      } else {
        const Eigen::VectorXd zt = engine.center();
        Eigen::VectorXd x = embed.map_real(zt);
        for (int i = 0; i < d; ++i) x[i] = std::clamp(x[i], 1.0, static_cast<double>(dims[static_cast<std::size_t>(i)]));
        ++calls;
        const double level = so_call_level(calls, budget, guarantee.delta);
        const auto n = lovasz::so_sample_count(d, n_max, sampler.sigma(),
                                               options.so_relax_factor * guarantee.epsilon / 4.0, level);
        auto est = lovasz::stochastic_subgradient(sampler, x, n);
        for (std::size_t i = 0; i < est.chain.points.size(); ++i) {
          if (i > 0 && est.chain.points[i] == est.chain.points[i - 1]) continue;
          book.at(est.chain.points[i]).merge(est.stats[i]);
        }
        queries.push_back(x);
        const Eigen::VectorXd gt = embed.pull_back(est.gradient);
        if (gt.lpNorm<Eigen::Infinity>() <= 1e-12) {
          if (trace) trace->zero_gradient_exit = true;
          if (trace) trace->cuts_per_dimension.push_back(cuts);
          return false;
        }
        try {
          engine.add_central_cut(gt);
        } catch (const NumericFailure& e) {
          throw SolverFailed(std::string("dimension reduction: engine failure: ") + e.what());
        }
        ++cuts;
      }
      hp = find_integral_hyperplane(engine.polytope());
      if (hp.kind != HyperplaneKind::kTooBig) {
        p = engine.polytope();
        if (trace) trace->cuts_per_dimension.push_back(cuts);
        return true;
      }
    }
  }

  GridPoint run() {
    const auto& dims = sampler.oracle().dims();
    const int d = static_cast<int>(dims.size());
    Eigen::VectorXd lo = Eigen::VectorXd::Ones(d);
    Eigen::VectorXd hi(d);
    for (int i = 0; i < d; ++i) hi[i] = static_cast<double>(dims[static_cast<std::size_t>(i)]);
    Polytope p(d);
    for (int i = 0; i < d; ++i) {
      // Size-1 coordinates give a flat box; represent them as a single level.
      p.add(Eigen::VectorXd::Unit(d, i), lo[i], cutplane::RowOrigin::kBox);
      p.add(-Eigen::VectorXd::Unit(d, i), -hi[i], cutplane::RowOrigin::kBox);
    }
    AffineSubgrid embed = AffineSubgrid::identity(d);

    bool stopped = false;
    while (p.dim() >= 2 && !stopped) {
      if (trace) trace->dimensions.push_back(p.dim());
      auto hp = find_integral_hyperplane(p);
      if (hp.kind == HyperplaneKind::kTooBig) {
        if (!cut_round(p, hp, embed)) {
          stopped = true;
          break;
        }
      } else if (trace) {
        trace->cuts_per_dimension.push_back(0);
      }
      if (hp.kind == HyperplaneKind::kEmpty) {
        if (trace) trace->ended_empty = true;
        stopped = true;
        break;
      }
      auto proj = project_polytope(p, hp.normal, hp.level, embed);
      p = std::move(proj.polytope);
      embed = std::move(proj.embed);
    }
    if (!stopped) {
      if (trace) trace->dimensions.push_back(p.dim());
      finish_line(p, embed);
    }
    if (trace) {
      trace->so_calls = calls;
      trace->so_budget = budget;
    }
    if (queries.empty()) throw SolverFailed("dimension reduction: no candidate points");
    const auto best = cutplane::finalist_pgs(sampler, queries,
                                             Guarantee::pgs(guarantee.epsilon / 4.0, guarantee.delta / 4.0), &book);
    return lovasz::round_to_integer(sampler, best, guarantee, &book);
  }
};

}  // namespace

GridPoint dimension_reduction_solve(Sampler& sampler, const Guarantee& guarantee, const DimredOptions& options,
                                    DimredTrace* trace) {
  guarantee.validate();
  if (guarantee.is_iz()) throw std::invalid_argument("dimension_reduction_solve runs in PGS mode");
  if (!(options.so_relax_factor > 0.0)) throw std::invalid_argument("so_relax_factor must be positive");
  const auto& dims = sampler.oracle().dims();
  if (dims.size() == 1) {
    if (trace) trace->dimensions.push_back(1);
    return {onedim::enhanced_adaptive_sampling(sampler, guarantee)};
  }
  bool degenerate = false;
  for (auto n : dims) degenerate |= n < 2;
  if (degenerate) {
    GridPoint lo(dims.size(), 1);
    GridPoint hi(dims.begin(), dims.end());
    auto reduced = AffineRestrictionOracle::sub_box(sampler.oracle(), lo, hi);
    if (reduced.dims().empty()) return lo;
    Sampler inner = sampler.rebind(reduced);
    return reduced.lift(dimension_reduction_solve(inner, guarantee, options, trace));
  }
  const double n_max = static_cast<double>(*std::max_element(dims.begin(), dims.end()));
  Solve s{sampler, guarantee, options, trace, SampleBook(guarantee.delta), {}, 0,
          so_call_budget(static_cast<int>(dims.size()), n_max), n_max};
  return s.run();
}

}  // namespace cso::dimred

#include "cso/cut_engine.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cso/errors.hpp"

namespace cso::cutplane {

namespace {

struct Scaled {
  Eigen::MatrixXd as;  // rows a_i / s_i
  Eigen::VectorXd slack;
};

std::optional<Scaled> scaled_rows(const Polytope& p, const Eigen::VectorXd& x) {
  Scaled out;
  out.slack = p.slacks(x);
  if ((out.slack.array() <= 0.0).any() || !out.slack.allFinite()) return std::nullopt;
  out.as = p.normals();
  out.as.array().colwise() /= out.slack.array();
  return out;
}

using Evaluator = BarrierEval (*)(const Polytope&, const Eigen::VectorXd&);

double value_or_inf(Evaluator eval, const Polytope& p, const Eigen::VectorXd& x) {
  if (!p.strictly_contains(x)) return std::numeric_limits<double>::infinity();
  try {
    return eval(p, x).value;
  } catch (const NumericFailure&) {
    return std::numeric_limits<double>::infinity();
  }
}

Eigen::VectorXd damped_newton(Evaluator eval, const Polytope& p, Eigen::VectorXd x, const NewtonOptions& opts) {
  if (!p.strictly_contains(x)) throw NumericFailure("Newton start is not strictly feasible");
  for (int it = 0; it < opts.max_iterations; ++it) {
    const auto e = eval(p, x);
    Eigen::LLT<Eigen::MatrixXd> llt(e.hessian);
    if (llt.info() != Eigen::Success) throw NumericFailure("barrier Hessian is not positive definite");
    const Eigen::VectorXd step = -llt.solve(e.gradient);
    const double decrement2 = -e.gradient.dot(step);
    if (!std::isfinite(decrement2)) throw NumericFailure("non-finite Newton decrement");
    if (std::sqrt(std::max(0.0, decrement2)) <= opts.tolerance) return x;
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Eigen::VectorXd trial = x + t * step;
      const double v = value_or_inf(eval, p, trial);
      if (v <= e.value - 0.25 * t * decrement2) {
        x = trial;
        moved = true;
        break;
      }
    }
    // Line search stalls only at the floating-point floor of the objective.
    if (!moved) {
      if (decrement2 < 1e-10) return x;
      throw NumericFailure("Newton line search failed");
    }
  }
  const auto e = eval(p, x);
  Eigen::LLT<Eigen::MatrixXd> llt(e.hessian);
  if (llt.info() == Eigen::Success && e.gradient.dot(llt.solve(e.gradient)) < 1e-6) return x;
  throw NumericFailure("Newton iteration limit reached");
}

}  // namespace

BarrierEval log_barrier(const Polytope& p, const Eigen::VectorXd& x) {
  auto sc = scaled_rows(p, x);
  if (!sc) throw NumericFailure("point outside the polytope interior");
  BarrierEval e;
  e.value = -sc->slack.array().log().sum();
  e.gradient = -sc->as.transpose() * Eigen::VectorXd::Ones(sc->as.rows());
  e.hessian = sc->as.transpose() * sc->as;
  Eigen::LLT<Eigen::MatrixXd> llt(e.hessian);
  if (llt.info() != Eigen::Success) throw NumericFailure("singular barrier Hessian");
  const Eigen::MatrixXd sol = llt.solve(sc->as.transpose());
  e.leverage = (sc->as.array() * sol.transpose().array()).rowwise().sum();
  return e;
}

BarrierEval volumetric_barrier(const Polytope& p, const Eigen::VectorXd& x) {
  auto sc = scaled_rows(p, x);
  if (!sc) throw NumericFailure("point outside the polytope interior");
  const Eigen::MatrixXd h = sc->as.transpose() * sc->as;
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) throw NumericFailure("singular volumetric Hessian");
  const Eigen::MatrixXd proj = sc->as * llt.solve(sc->as.transpose());
  BarrierEval e;
  e.leverage = proj.diagonal();
  const Eigen::MatrixXd l = llt.matrixL();
  e.value = l.diagonal().array().log().sum();
  e.gradient = -sc->as.transpose() * e.leverage;
  Eigen::MatrixXd inner = -2.0 * proj.array().square().matrix();
  inner.diagonal() += 3.0 * e.leverage;
  e.hessian = sc->as.transpose() * inner * sc->as;
  return e;
}

Eigen::VectorXd analytic_center(const Polytope& p, Eigen::VectorXd start, const NewtonOptions& opts) {
  return damped_newton(&log_barrier, p, std::move(start), opts);
}

Eigen::VectorXd volumetric_center(const Polytope& p, Eigen::VectorXd start, const NewtonOptions& opts) {
  return damped_newton(&volumetric_barrier, p, std::move(start), opts);
}

std::optional<Eigen::VectorXd> interior_point(const Polytope& p) {
  const int d = p.dim();
  const auto m = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd a(m + 1, d + 1);
  Eigen::VectorXd b(m + 1);
  a.topLeftCorner(m, d) = p.normals();
  for (Eigen::Index i = 0; i < m; ++i) a(i, d) = -p.row(static_cast<std::size_t>(i)).normal.norm();
  b.head(m) = p.offsets();
  a.row(m).setZero();
  a(m, d) = -1.0;  // tau <= 1 keeps the program bounded
  b[m] = -1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  c[d] = 1.0;
  const auto res = lp::maximize(a, b, c);
  if (res.status != lp::LpStatus::kOptimal || res.value <= 1e-12) return std::nullopt;
  Eigen::VectorXd x = res.x.head(d);
  if (!p.strictly_contains(x)) return std::nullopt;
  return x;
}

double ellipsoid_volume_bound(const Polytope& p, const Eigen::VectorXd& x_ac) {
  const auto e = log_barrier(p, x_ac);
  const double d = p.dim();
  const double m = static_cast<double>(p.size());
  const double r = m + 2.0 * std::sqrt(m);
  const double log_ball = 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
  Eigen::LLT<Eigen::MatrixXd> llt(e.hessian);
  const double log_det = 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  return std::exp(log_ball + d * std::log(r) - 0.5 * log_det);
}

Eigen::VectorXd hit_and_run_centroid(const Polytope& p, Eigen::VectorXd start, Rng& rng, int samples, int burn_in) {
  if (!p.strictly_contains(start)) throw NumericFailure("hit-and-run start is not interior");
  if (samples < 1) throw std::invalid_argument("hit_and_run_centroid needs at least one sample");
  const Eigen::MatrixXd a = p.normals();
  const int d = p.dim();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x = std::move(start);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  for (int step = 0; step < burn_in + samples; ++step) {
    Eigen::VectorXd u(d);
    for (int i = 0; i < d; ++i) u[i] = gauss(rng);
    u.normalize();
    const Eigen::VectorXd s = p.slacks(x);
    const Eigen::VectorXd au = a * u;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < au.size(); ++i) {
      if (au[i] > 0.0) lo = std::max(lo, -s[i] / au[i]);
      else if (au[i] < 0.0) hi = std::min(hi, -s[i] / au[i]);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw NumericFailure("hit-and-run on an unbounded polytope");
    const double t = lo + (hi - lo) * rng.uniform01();
    const Eigen::VectorXd next = x + t * u;
    if (p.strictly_contains(next)) x = next;
    if (step >= burn_in) sum += x;
  }
  return sum / samples;
}

CutEngine::CutEngine(Polytope polytope, EngineKind kind, std::uint64_t seed)
    : polytope_(std::move(polytope)), kind_(kind), rng_(seed) {
  auto start = interior_point(polytope_);
  if (!start) throw NumericFailure("polytope has empty interior");
  recenter(*start);
}

std::optional<std::size_t> CutEngine::removable_row() const {
  if (kind_ != EngineKind::kVaidya) return std::nullopt;
  const auto e = log_barrier(polytope_, center_);
  std::optional<std::size_t> best;
  double best_lev = kRemovalLeverage;
  for (std::size_t i = 0; i < polytope_.size(); ++i) {
    if (polytope_.row(i).origin != RowOrigin::kCut) continue;
    const double lev = e.leverage[static_cast<Eigen::Index>(i)];
    if (lev < best_lev) {
      best_lev = lev;
      best = i;
    }
  }
  return best;
}

Eigen::VectorXd CutEngine::nudge_inside(const Eigen::VectorXd& a) const {
  // Half a Dikin step of the pre-cut polytope along H^{-1} a stays feasible for old rows.
  const auto e = log_barrier(polytope_, center_);
  const Eigen::VectorXd dir = e.hessian.llt().solve(a);
  const double norm = std::sqrt(std::max(a.dot(dir), 0.0));
  if (!(norm > 0.0)) throw NumericFailure("degenerate cut normal");
  return center_ + 0.5 * dir / norm;
}

std::uint64_t CutEngine::add_central_cut(const Eigen::VectorXd& g) {
  const Eigen::VectorXd a = -g;
  const Eigen::VectorXd start = nudge_inside(a);
  const auto id = polytope_.add(a, a.dot(center_), RowOrigin::kCut, center_);
  recenter(start);
  return id;
}

std::uint64_t CutEngine::add_row(const Eigen::VectorXd& a, double b) {
  const auto id = polytope_.add(a, b, RowOrigin::kBox);
  Eigen::VectorXd start = center_;
  if (!polytope_.strictly_contains(start)) {
    auto inside = interior_point(polytope_);
    if (!inside) throw NumericFailure("row leaves an empty interior");
    start = *inside;
  }
  recenter(start);
  return id;
}

void CutEngine::remove_row(std::size_t index) {
  polytope_.remove(index);
  recenter(center_);
}

void CutEngine::recenter(Eigen::VectorXd start) {
  if (kind_ == EngineKind::kRandomWalk) {
    const int d = polytope_.dim();
    Eigen::VectorXd c = hit_and_run_centroid(polytope_, start, rng_, 50 * d, 10 * d * d * d);
    if (!polytope_.strictly_contains(c)) c = analytic_center(polytope_, start);
    center_ = c;
    return;
  }
  if (kind_ == EngineKind::kVaidya) {
    try {
      center_ = volumetric_center(polytope_, start);
      return;
    } catch (const NumericFailure&) {
      kind_ = EngineKind::kAnalyticCenter;
      fell_back_ = true;
    }
  }
  center_ = analytic_center(polytope_, std::move(start));
}

StepOutcome engine_step(CutEngine& engine,
                        const std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>& separation) {
  StepOutcome out;
  if (auto idx = engine.removable_row()) {
    out.action = EngineAction::kRemoved;
    out.row_id = engine.polytope().row(*idx).id;
    engine.remove_row(*idx);
    return out;
  }
  const Eigen::VectorXd z = engine.center();
  auto g = separation(z);
  if (!g) return out;
  out.action = EngineAction::kAdded;
  out.query = z;
  out.row_id = engine.add_central_cut(*g);
  return out;
}

}  // namespace cso::cutplane

#include "cso/cutplane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "cso/errors.hpp"
#include "cso/lovasz.hpp"

namespace cso::cutplane {

namespace {

double max_size(const std::vector<std::int64_t>& dims) {
  return static_cast<double>(*std::max_element(dims.begin(), dims.end()));
}

Eigen::VectorXd to_real(PointView x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = static_cast<double>(x[i]);
  return v;
}

GridPoint solve_full_box(Sampler& sampler, const Guarantee& guarantee, double lipschitz, const VaidyaOptions& options,
                         VaidyaTrace* trace) {
  const auto& dims = sampler.oracle().dims();
  const int d = static_cast<int>(dims.size());
  const double n = max_size(dims);
  const double eps = guarantee.epsilon;
  const double delta = guarantee.delta;
  const auto t_max = vaidya_iterations(d, lipschitz, n, eps, options.cv);
  const double so_eps = options.so_relax_factor * eps / 8.0;
  const double so_delta = delta / (4.0 * static_cast<double>(t_max));
  const auto n_so = lovasz::so_sample_count(d, n, sampler.sigma(), so_eps, so_delta);
  const double stall = 2.0 * eps / (d * std::sqrt(n));

  Eigen::VectorXd lo = Eigen::VectorXd::Ones(d);
  Eigen::VectorXd hi(d);
  for (int i = 0; i < d; ++i) hi[i] = static_cast<double>(dims[static_cast<std::size_t>(i)]);
  CutEngine engine(Polytope::box(lo, hi), options.engine, options.seed);

  SampleBook book(delta);
  std::map<std::uint64_t, Eigen::VectorXd> live_queries;  // cut row id -> query point
  std::vector<Eigen::VectorXd> all_queries;
  std::vector<double> values;
  bool numeric_stop = false;

  for (std::int64_t it = 0; it < t_max; ++it) {
    if (trace) ++trace->iterations;
    const Eigen::VectorXd z = engine.center();
    // A polytope squeezed below floating-point resolution stops the cutting phase early.
    try {
      if (auto idx = engine.removable_row()) {
        live_queries.erase(engine.polytope().row(*idx).id);
        engine.remove_row(*idx);
        if (trace) ++trace->removals;
      } else if (auto repair = out_of_box_cut(z, dims)) {
        engine.add_row(*repair, repair->dot(z));
        if (trace) ++trace->box_repairs;
      } else {
        auto est = lovasz::stochastic_subgradient(sampler, z, n_so);
        for (std::size_t i = 0; i < est.chain.points.size(); ++i) {
          if (i > 0 && est.chain.points[i] == est.chain.points[i - 1]) continue;
          book.at(est.chain.points[i]).merge(est.stats[i]);
        }
        if (trace) {
          trace->queries.push_back(z);
          trace->query_values.push_back(est.value);
        }
        if (est.gradient.lpNorm<Eigen::Infinity>() <= 1e-12) {
          if (trace) trace->zero_gradient_exit = true;
          return lovasz::round_to_integer(sampler, z, guarantee, &book);
        }
        all_queries.push_back(z);
        values.push_back(est.value);
        const auto id = engine.add_central_cut(est.gradient);
        if (trace) ++trace->cuts;
        live_queries.emplace(id, z);
        if (options.early_stop && values.size() >= 4) {
          const auto k = values.size();
          const double recent = std::min({values[k - 1], values[k - 2], values[k - 3]});
          const double before = *std::min_element(values.begin(), values.end() - 3);
          if (recent > before - stall) {
            if (trace) trace->early_stopped = true;
            break;
          }
        }
      }
    } catch (const NumericFailure&) {
      numeric_stop = true;
      if (trace) trace->numeric_stop = true;
      break;
    }
    if (trace && trace->keep_polytopes) trace->polytopes.push_back(engine.polytope());
  }
  if (trace) trace->fell_back = engine.fell_back();

  std::vector<Eigen::VectorXd> finalists;
  if (engine.kind() == EngineKind::kVaidya && !options.early_stop && !numeric_stop) {
    for (const auto& [_, q] : live_queries) finalists.push_back(q);
  } else {
    finalists = all_queries;
  }
  if (finalists.empty()) finalists.push_back(engine.center());
  const auto best = finalist_pgs(sampler, finalists, Guarantee::pgs(eps / 4.0, delta / 4.0), &book);
  return lovasz::round_to_integer(sampler, best, guarantee, &book);
}

}  // namespace

std::int64_t vaidya_iterations(int d, double lipschitz, double n, double epsilon, double cv) {
  const double arg = 8.0 * d * lipschitz * n / epsilon;
  const double t = std::ceil(cv * d * std::log(std::max(arg, std::exp(1.0))));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(t));
}

GridPoint stochastic_vaidya(Sampler& sampler, const Guarantee& guarantee, double lipschitz,
                            const VaidyaOptions& options, VaidyaTrace* trace) {
  guarantee.validate();
  if (guarantee.is_iz()) throw std::invalid_argument("stochastic_vaidya runs in PGS mode; use accelerated_vaidya_iz");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
    throw std::invalid_argument("stochastic_vaidya needs a finite Lipschitz constant");
  }
  if (!(options.so_relax_factor > 0.0)) throw std::invalid_argument("so_relax_factor must be positive");
  const auto& dims = sampler.oracle().dims();
  bool degenerate = false;
  for (auto n : dims) degenerate |= n < 2;
  if (!degenerate) return solve_full_box(sampler, guarantee, lipschitz, options, trace);

  // Size-1 coordinates carry no freedom; solve on the remaining ones.
  GridPoint lo(dims.size(), 1);
  GridPoint hi(dims.begin(), dims.end());
  auto reduced = AffineRestrictionOracle::sub_box(sampler.oracle(), lo, hi);
  if (reduced.dims().empty()) return lo;
  Sampler inner = sampler.rebind(reduced);
  const auto t = solve_full_box(inner, guarantee, lipschitz, options, trace);
  return reduced.lift(t);
}

Eigen::VectorXd finalist_pgs(Sampler& sampler, const std::vector<Eigen::VectorXd>& s, const Guarantee& guarantee,
                             SampleBook* book) {
  guarantee.validate();
  if (s.empty()) throw std::invalid_argument("finalist_pgs: empty candidate set");
  if (s.size() == 1) return s.front();
  const auto& dims = sampler.oracle().dims();
  std::vector<lovasz::Chain> chains;
  std::map<GridPoint, int> distinct;
  for (const auto& z : s) {
    chains.push_back(lovasz::neighbor_chain(z, dims));
    for (const auto& p : chains.back().points) distinct.emplace(p, 0);
  }
  const double alpha = guarantee.delta / static_cast<double>(distinct.size());
  const double width = guarantee.epsilon / 2.0;
  SampleBook local(alpha);
  SampleBook& store = book ? *book : local;
  std::map<GridPoint, double> means;
  for (const auto& [p, _] : distinct) {
    auto& kept = store.at(p);
    SampleStats st = kept;
    st.alpha = alpha;
    sample_to_width(sampler, p, width, st);
    kept.count = st.count;
    kept.sum = st.sum;
    means[p] = st.mean();
  }
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.size(); ++k) {
    std::vector<double> v;
    for (const auto& p : chains[k].points) v.push_back(means.at(p));
    const double val = lovasz::lovasz_value(chains[k], v);
    if (val < best_value) {
      best_value = val;
      best = k;
    }
  }
  return s[best];
}

GridPoint accelerated_vaidya_iz(Sampler& sampler, const Guarantee& guarantee, double lipschitz,
                                const VaidyaOptions& options, AcceleratedTrace* trace) {
  guarantee.validate();
  if (!guarantee.is_iz()) throw std::invalid_argument("accelerated_vaidya_iz needs an indifference-zone guarantee");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
    throw std::invalid_argument("accelerated_vaidya_iz needs a finite Lipschitz constant");
  }
  const auto& dims = sampler.oracle().dims();
  const double n = max_size(dims);
  const double c = *guarantee.iz_gap;
  const int epochs = static_cast<int>(std::ceil(std::log2(n))) + 1;
  const double epoch_delta = guarantee.delta / (2.0 * epochs);

  GridPoint lo(dims.size(), 1);
  GridPoint hi(dims.begin(), dims.end());
  GridPoint x = lo;
  double eps = c * n / 4.0;
  for (int e = 0; e < epochs; ++e) {
    auto box = AffineRestrictionOracle::sub_box(sampler.oracle(), lo, hi);
    if (box.dims().empty()) {
      x = lo;
    } else {
      Sampler inner = sampler.rebind(box);
      x = box.lift(stochastic_vaidya(inner, Guarantee::pgs(eps, epoch_delta), lipschitz, options));
    }
    if (trace) {
      trace->box_lo.push_back(lo);
      trace->box_hi.push_back(hi);
      trace->epoch_solutions.push_back(x);
      trace->epoch_epsilons.push_back(eps);
    }
    const double r = std::ldexp(n, -e - 2);
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const double xi = static_cast<double>(x[i]);
      lo[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(xi - r)));
      hi[i] = std::min<std::int64_t>(dims[i], static_cast<std::int64_t>(std::floor(xi + r)));
    }
    eps /= 2.0;
  }
  return lovasz::round_to_integer(sampler, to_real(x), Guarantee::pgs(c / 2.0, guarantee.delta / 2.0));
}

}  // namespace cso::cutplane

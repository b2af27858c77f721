#include "cso/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "cso/harness.hpp"
#include "cso/lattice.hpp"
#include "cso/lovasz.hpp"
#include "cso/models.hpp"
#include "cso/onedim.hpp"
#include "cso/queue.hpp"

namespace cso {

namespace {

using Check = std::function<std::string()>;  // empty string means pass

std::string lovasz_properties() {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    auto model = bench::SeparableModel::random(d, 6, rng, 0.0);
    const auto dims = model.dims();
    auto f = [&](PointView x) { return model.value(x); };
    Eigen::VectorXd x(d), y(d);
    GridPoint g(d);
    for (int i = 0; i < d; ++i) {
      x[i] = 1.0 + 5.0 * rng.uniform01();
      y[i] = 1.0 + 5.0 * rng.uniform01();
      g[i] = 1 + static_cast<std::int64_t>(rng() % 6);
    }
    Eigen::VectorXd gx = Eigen::VectorXd::Map(std::vector<double>(g.begin(), g.end()).data(), d);
    if (lovasz::lovasz_extension(gx, dims, f) != model.value(g)) return "integral disagreement";
    const auto chain = lovasz::neighbor_chain(x, dims);
    std::vector<double> vals;
    for (const auto& p : chain.points) vals.push_back(model.value(p));
    const auto sub = lovasz::lovasz_subgradient(chain, vals);
    const double fx = lovasz::lovasz_value(chain, vals);
    if (lovasz::lovasz_extension(y, dims, f) < fx + sub.dot(y - x) - 1e-9) return "subgradient inequality";
  }
  return {};
}

std::string sample_count_minimality() {
  for (double h : {0.01, 0.1, 0.37, 1.0}) {
    for (double alpha : {1e-6, 0.01, 0.2}) {
      const auto n = samples_for_width(h, 1.3, alpha);
      if (hoeffding_halfwidth(n, 1.3, alpha) > h) return "count too small";
      if (n > 1 && hoeffding_halfwidth(n - 1, 1.3, alpha) <= h) return "count not minimal";
    }
  }
  return {};
}

std::string lll_conditions() {
  using lattice::Rational;
  Rng rng(202);
  std::uniform_int_distribution<int> entry(-50, 50);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    lattice::Basis<Rational> b(n, std::vector<Rational>(n));
    std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        rows[i][j] = entry(rng);
        b[i][j] = rows[i][j];
      }
    }
    if (lattice::integer_determinant(rows) == 0) continue;
    const auto res = lattice::lll_reduce(b, Rational(3, 4));
    const auto gs = lattice::gram_schmidt(res.basis);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (abs(gs.mu[i][j]) > Rational(1, 2)) return "size condition";
      }
      if (i > 0 && gs.norm2[i] < (Rational(3, 4) - gs.mu[i][i - 1] * gs.mu[i][i - 1]) * gs.norm2[i - 1]) {
        return "Lovasz condition";
      }
    }
  }
  return {};
}

std::string queue_conservation() {
  Rng rng(303);
  auto arrivals = bench::nhpp_arrivals(bench::QueueModel::rate1, bench::QueueModel::kRate1Max, 1.0, 2.0, rng);
  std::vector<double> services(arrivals.size());
  std::exponential_distribution<double> svc(1.0);
  for (auto& s : services) s = svc(rng);
  bool balanced = true;
  const auto res = bench::simulate_fcfs(arrivals, services, 40, [&](const bench::QueueCounts& c) {
    balanced = balanced && c.served + c.waiting + c.in_service == c.arrived;
  });
  if (!balanced) return "conservation";
  for (std::size_t i = 1; i < arrivals.size(); ++i) {
    if (res.service_start[i] < res.service_start[i - 1]) return "FCFS order";
  }
  return {};
}

std::string noiseless_solvers() {
  Rng rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    auto model = bench::SeparableModel::random(1, 40, rng, 0.0);
    auto oracle = model.oracle();
    Rng srng(trial);
    Sampler s(oracle, srng);
    const auto g = Guarantee::pgs(1e-9, 0.1);
    if (onedim::adaptive_sampling(s, g) != model.optimum[0]) return "AS missed the optimum";
    if (onedim::enhanced_adaptive_sampling(s, g) != model.optimum[0]) return "EAS missed the optimum";
  }
  return {};
}

std::string csv_determinism() {
  const auto cfg = harness::parse_config(
      R"({"algorithm":"EAS","model":"SEPARABLE","d":1,"N":[20,40],"epsilon":0.3,"delta":0.01,)"
      R"("replications":3,"master_seed":9})");
  std::ostringstream a;
  std::ostringstream b;
  harness::write_csv(a, harness::run_experiment(cfg, 2).records);
  harness::write_csv(b, harness::run_experiment(cfg, 1).records);
  return a.str() == b.str() ? std::string{} : "CSV differs between runs";
}

}  // namespace

std::vector<SelftestResult> run_selftest(std::ostream& out) {
  const std::vector<std::pair<std::string, Check>> checks = {
      {"lovasz-extension", lovasz_properties},   {"sample-counts", sample_count_minimality},
      {"lll-reduction", lll_conditions},         {"queue-conservation", queue_conservation},
      {"noiseless-1d-solvers", noiseless_solvers}, {"csv-determinism", csv_determinism},
  };
  std::vector<SelftestResult> results;
  for (const auto& [name, check] : checks) {
    SelftestResult r{name, false, {}};
    try {
      r.detail = check();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    out << (r.passed ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : ": " + r.detail) << '\n';
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace cso

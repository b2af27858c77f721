#include <benchmark/benchmark.h>

#include <random>

#include <Eigen/Dense>

#include "cso/cut_engine.hpp"
#include "cso/cutplane.hpp"
#include "cso/lattice.hpp"
#include "cso/lovasz.hpp"
#include "cso/models.hpp"
#include "cso/onedim.hpp"
#include "cso/oracle.hpp"
#include "cso/queue.hpp"

namespace {

using namespace cso;

void BM_HoeffdingHalfwidth(benchmark::State& state) {
  std::uint64_t n = 1;
  for (auto _ : state) benchmark::DoNotOptimize(hoeffding_halfwidth(n++, 1.0, 1e-6));
}
BENCHMARK(BM_HoeffdingHalfwidth);

void BM_LovaszExtension(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto model = bench::SeparableModel::random(d, 100, rng, 0.0);
  const auto dims = model.dims();
  Eigen::VectorXd x(d);
  for (int i = 0; i < d; ++i) x[i] = 1.0 + 99.0 * rng.uniform01();
  auto f = [&](PointView p) { return model.value(p); };
  for (auto _ : state) benchmark::DoNotOptimize(lovasz::lovasz_extension(x, dims, f));
}
BENCHMARK(BM_LovaszExtension)->Arg(2)->Arg(8)->Arg(32);

void BM_CentralCut(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto kind = static_cast<cutplane::EngineKind>(state.range(1));
  for (auto _ : state) {
    cutplane::CutEngine engine(cutplane::Polytope::box(Eigen::VectorXd::Ones(d), Eigen::VectorXd::Constant(d, 50.0)),
                               kind, 3);
    Rng rng(2);
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd g(d);
      for (int i = 0; i < d; ++i) g[i] = rng.uniform01() - 0.5;
      engine.add_central_cut(g);
    }
    benchmark::DoNotOptimize(engine.center());
  }
}
BENCHMARK(BM_CentralCut)->ArgsProduct({{2, 4}, {0, 1, 2}})->Unit(benchmark::kMicrosecond);

void BM_EasSolve(benchmark::State& state) {
  const auto n = state.range(0);
  Rng model_rng(4);
  const auto model = bench::SeparableModel::random(1, n, model_rng, 1.0);
  const auto oracle = model.oracle();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    Sampler sampler(oracle, rng);
    benchmark::DoNotOptimize(onedim::enhanced_adaptive_sampling(sampler, Guarantee::pgs(0.2, 1e-6)));
  }
}
BENCHMARK(BM_EasSolve)->Arg(10)->Arg(150)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_VaidyaSolve(benchmark::State& state) {
  Rng model_rng(5);
  const auto model = bench::SeparableModel::random(2, 20, model_rng, 0.1);
  const auto oracle = model.oracle();
  cutplane::VaidyaOptions options;
  options.early_stop = true;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    Sampler sampler(oracle, rng);
    benchmark::DoNotOptimize(
        cutplane::stochastic_vaidya(sampler, Guarantee::pgs(0.5, 0.05), model.lipschitz(), options));
  }
}
BENCHMARK(BM_VaidyaSolve)->Unit(benchmark::kMillisecond);

void BM_LllReduce(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(6);
  std::uniform_int_distribution<std::int64_t> entry(-50, 50);
  lattice::Basis<double> b(d, std::vector<double>(d));
  for (auto& row : b) {
    for (auto& x : row) x = static_cast<double>(entry(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(lattice::lll_reduce(b, 0.75));
}
BENCHMARK(BM_LllReduce)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_QueueReplication(benchmark::State& state) {
  bench::QueueModel model;
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(bench::queue_sim_run(model, state.range(0), rng));
}
BENCHMARK(BM_QueueReplication)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cso/errors.hpp"
#include "cso/harness.hpp"
#include "cso/models.hpp"
#include "cso/queue.hpp"
#include "cso/rng.hpp"
#include "cso/selftest.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolverFailed = 3;

int run_command(const std::string& config_path, std::optional<int> threads, const std::string& output_override) {
  const auto config = cso::harness::load_config(config_path);
  const int workers = threads ? std::max(1, std::min(*threads, cso::harness::worker_count()))
                              : cso::harness::worker_count();
  const auto result = cso::harness::run_experiment(config, workers);
  const std::string path = output_override.empty() ? config.output_path : output_override;
  if (path.empty() || path == "-") {
    cso::harness::write_csv(std::cout, result.records);
    cso::harness::write_summary(std::cerr, result);
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cso::ConfigError("cannot write '" + path + "'");
    cso::harness::write_csv(out, result.records);
    cso::harness::write_summary(std::cout, result);
  }
  int failed = 0;
  for (const auto& r : result.records) {
    if (!r.error.empty()) {
      std::cerr << "run N=" << r.n << " replicate=" << r.replicate << " failed: " << r.error << '\n';
      ++failed;
    }
  }
  return failed > 0 ? kExitSolverFailed : 0;
}

struct LandscapeArgs {
  std::string model = "QUEUE";
  std::int64_t n = 150;
  int replications = 200;
  std::uint64_t seed = 1;
  double noise_sigma = 1.0;
  double horizon = 2.0;
  std::string output;
};

int landscape_command(const LandscapeArgs& a) {
  if (a.n < 1 || a.replications < 1) throw cso::ConfigError("N and reps must be positive");
  std::vector<std::int64_t> points(static_cast<std::size_t>(a.n));
  std::iota(points.begin(), points.end(), 1);
  std::vector<cso::harness::LandscapeRow> rows;
  if (a.model == "QUEUE") {
    cso::bench::QueueModel qm;
    qm.n = a.n;
    qm.horizon = a.horizon;
    rows = cso::harness::landscape_scan(cso::bench::QueueOracle(qm, 10.0), points, a.replications, a.seed);
  } else if (a.model == "SEPARABLE") {
    auto rng = cso::seed_stream(a.seed, {"model", a.n, std::int64_t{0}});
    const auto model = cso::bench::SeparableModel::random(1, a.n, rng, a.noise_sigma);
    rows = cso::harness::landscape_scan(model.oracle(), points, a.replications, a.seed);
  } else {
    throw cso::ConfigError("unknown model '" + a.model + "'");
  }
  if (a.output.empty() || a.output == "-") {
    cso::harness::write_landscape_csv(std::cout, rows);
  } else {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw cso::ConfigError("cannot write '" + a.output + "'");
    cso::harness::write_landscape_csv(out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete convex simulation optimization solvers and experiment runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  std::string config_path;
  std::optional<int> threads;
  std::string output_override;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--threads", threads, "Worker threads, further capped by CSO_THREADS");
  run->add_option("--output", output_override, "CSV destination, overriding output_path ('-' for stdout)");

  auto* landscape = app.add_subcommand("landscape", "Empirical one-dimensional landscape with 95% intervals");
  LandscapeArgs largs;
  landscape->add_option("--model", largs.model, "QUEUE or SEPARABLE")->capture_default_str();
  landscape->add_option("--N", largs.n, "Grid size")->capture_default_str();
  landscape->add_option("--reps", largs.replications, "Replications per point")->capture_default_str();
  landscape->add_option("--seed", largs.seed, "Master seed")->capture_default_str();
  landscape->add_option("--sigma", largs.noise_sigma, "Noise level of the separable model")->capture_default_str();
  landscape->add_option("--horizon", largs.horizon, "Queue horizon")->capture_default_str();
  landscape->add_option("--output", largs.output, "CSV destination (default stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(config_path, threads, output_override);
    if (*landscape) return landscape_command(largs);
    if (*selftest) {
      bool ok = true;
      for (const auto& r : cso::run_selftest(std::cout)) ok = ok && r.passed;
      return ok ? 0 : kExitSolverFailed;
    }
  } catch (const cso::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverFailed;
  }
  return 0;
}

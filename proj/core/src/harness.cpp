#include "cso/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cso/baseline.hpp"
#include "cso/cutplane.hpp"
#include "cso/dimred.hpp"
#include "cso/errors.hpp"
#include "cso/models.hpp"
#include "cso/multieas.hpp"
#include "cso/onedim.hpp"
#include "cso/queue.hpp"

namespace cso::harness {

namespace {

using nlohmann::json;

const std::vector<std::pair<Algorithm, std::string>> kAlgorithmNames = {
    {Algorithm::kAs, "AS"},         {Algorithm::kAsIz, "AS_IZ"},     {Algorithm::kEas, "EAS"},
    {Algorithm::kVaidya, "VAIDYA"}, {Algorithm::kVaidyaAcc, "VAIDYA_ACC"}, {Algorithm::kDimred, "DIMRED"},
    {Algorithm::kMultiEas, "MULTI_EAS"}, {Algorithm::kSubgradBaseline, "SUBGRAD_BASELINE"},
};

const std::vector<std::pair<cutplane::EngineKind, std::string>> kEngineNames = {
    {cutplane::EngineKind::kVaidya, "VAIDYA"},
    {cutplane::EngineKind::kAnalyticCenter, "ANALYTIC_CENTER"},
    {cutplane::EngineKind::kRandomWalk, "RANDOM_WALK"},
};

template <typename E>
E lookup(const std::vector<std::pair<E, std::string>>& table, const std::string& name, const char* what) {
  for (const auto& [value, label] : table) {
    if (label == name) return value;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
}

bool is_iz(Algorithm a) { return a == Algorithm::kAsIz || a == Algorithm::kVaidyaAcc; }
bool needs_lipschitz(Algorithm a) {
  return a == Algorithm::kVaidya || a == Algorithm::kVaidyaAcc || a == Algorithm::kSubgradBaseline;
}
bool one_dimensional(Algorithm a) { return a == Algorithm::kAs || a == Algorithm::kAsIz || a == Algorithm::kEas; }

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad type for '") + key + "'");
  }
}

}  // namespace

std::string to_string(Algorithm a) {
  for (const auto& [value, label] : kAlgorithmNames) {
    if (value == a) return label;
  }
  return "?";
}

std::string to_string(ModelKind m) { return m == ModelKind::kSeparable ? "SEPARABLE" : "QUEUE"; }

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig c;
  bool has_algorithm = false;
  bool has_model = false;
  bool has_n = false;
  for (const auto& [key, value] : doc.items()) {
    const char* k = key.c_str();
    if (key == "algorithm") {
      c.algorithm = lookup(kAlgorithmNames, get_as<std::string>(value, k), "algorithm");
      has_algorithm = true;
    } else if (key == "model") {
      const auto name = get_as<std::string>(value, k);
      if (name == "SEPARABLE") {
        c.model = ModelKind::kSeparable;
      } else if (name == "QUEUE") {
        c.model = ModelKind::kQueue;
      } else {
        throw ConfigError("unknown model '" + name + "'");
      }
      has_model = true;
    } else if (key == "d") {
      c.d = get_as<int>(value, k);
    } else if (key == "N") {
      if (value.is_array()) {
        for (const auto& v : value) c.sizes.push_back(get_as<std::int64_t>(v, k));
      } else {
        c.sizes.push_back(get_as<std::int64_t>(value, k));
      }
      has_n = true;
    } else if (key == "epsilon") {
      c.epsilon = get_as<double>(value, k);
    } else if (key == "delta") {
      c.delta = get_as<double>(value, k);
    } else if (key == "iz_c") {
      c.iz_c = get_as<double>(value, k);
    } else if (key == "lipschitz_L") {
      if (value.is_string()) {
        if (value.get<std::string>() != "auto") throw ConfigError("lipschitz_L must be a number or \"auto\"");
        c.lipschitz_auto = true;
      } else {
        c.lipschitz = get_as<double>(value, k);
      }
    } else if (key == "replications") {
      c.replications = get_as<int>(value, k);
    } else if (key == "master_seed") {
      c.master_seed = get_as<std::uint64_t>(value, k);
    } else if (key == "engine_kind") {
      c.engine = lookup(kEngineNames, get_as<std::string>(value, k), "engine_kind");
    } else if (key == "output_path") {
      c.output_path = get_as<std::string>(value, k);
    } else if (key == "noise_sigma") {
      c.noise_sigma = get_as<double>(value, k);
    } else if (key == "queue_sigma2") {
      c.queue_sigma2 = get_as<double>(value, k);
    } else if (key == "queue_horizon") {
      c.queue_horizon = get_as<double>(value, k);
    } else if (key == "so_relax_factor") {
      c.so_relax_factor = get_as<double>(value, k);
    } else if (key == "early_stop") {
      c.early_stop = get_as<bool>(value, k);
    } else if (key == "timing") {
      c.timing = get_as<bool>(value, k);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (!has_algorithm) throw ConfigError("missing 'algorithm'");
  if (!has_model) throw ConfigError("missing 'model'");
  if (!has_n) throw ConfigError("missing 'N'");
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
  if (c.d < 1) throw ConfigError("d must be at least 1");
  if (c.sizes.empty()) throw ConfigError("N list is empty");
  for (auto n : c.sizes) {
    if (n < 1) throw ConfigError("every N must be at least 1");
  }
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (c.replications < 1) throw ConfigError("replications must be at least 1");
  if (c.model == ModelKind::kQueue && c.d != 1) throw ConfigError("QUEUE model is one-dimensional");
  if (one_dimensional(c.algorithm) && c.d != 1) throw ConfigError(to_string(c.algorithm) + " needs d = 1");
  if (is_iz(c.algorithm)) {
    if (!c.iz_c || !(*c.iz_c > 0.0)) throw ConfigError(to_string(c.algorithm) + " needs a positive iz_c");
  } else if (!c.epsilon || !(*c.epsilon > 0.0)) {
    throw ConfigError(to_string(c.algorithm) + " needs a positive epsilon");
  }
  if (c.epsilon && !(*c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (needs_lipschitz(c.algorithm)) {
    if (c.lipschitz_auto) {
      if (c.model != ModelKind::kSeparable) throw ConfigError("lipschitz_L \"auto\" needs the SEPARABLE model");
    } else if (!c.lipschitz || !(*c.lipschitz >= 0.0)) {
      throw ConfigError(to_string(c.algorithm) + " needs lipschitz_L");
    }
  }
  if (!(c.noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be nonnegative");
  if (!(c.queue_sigma2 >= 0.0)) throw ConfigError("queue_sigma2 must be nonnegative");
  if (!(c.queue_horizon > 0.0)) throw ConfigError("queue_horizon must be positive");
  if (!(c.so_relax_factor >= 1.0)) throw ConfigError("so_relax_factor must be at least 1");
}

int worker_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("CSO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v > 0) n = std::min<long>(n, v);
  }
  return n;
}

RunRecord run_single(const ExperimentConfig& c, std::int64_t n, int replicate) {
  RunRecord r;
  r.algorithm = c.algorithm;
  r.model = c.model;
  r.d = c.d;
  r.n = n;
  r.epsilon = c.epsilon;
  r.delta = c.delta;
  r.replicate = replicate;
  const auto alg_name = to_string(c.algorithm);
  r.seed = derive_seed(c.master_seed, {"solver", alg_name, n, std::int64_t{replicate}});

  std::optional<bench::SeparableModel> separable;
  std::unique_ptr<StochasticOracle> oracle;
  Rng model_rng = seed_stream(c.master_seed, {"model", n, std::int64_t{replicate}});
  if (c.model == ModelKind::kSeparable) {
    separable = bench::SeparableModel::random(c.d, n, model_rng, c.noise_sigma);
    oracle = std::make_unique<GaussianNoiseOracle>(separable->oracle());
  } else {
    bench::QueueModel qm;
    qm.n = n;
    qm.horizon = c.queue_horizon;
    oracle = std::make_unique<bench::QueueOracle>(qm, c.queue_sigma2);
  }
  double lipschitz = 0.0;
  if (needs_lipschitz(c.algorithm)) lipschitz = c.lipschitz_auto ? separable->lipschitz() : *c.lipschitz;

  Rng solver_rng(r.seed);
  Sampler sampler(*oracle, solver_rng);
  const Guarantee guarantee = is_iz(c.algorithm) ? Guarantee::pcs_iz(*c.iz_c, c.delta)
                                                 : Guarantee::pgs(*c.epsilon, c.delta);
  cutplane::VaidyaOptions vopt;
  vopt.engine = c.engine;
  vopt.so_relax_factor = c.so_relax_factor;
  vopt.early_stop = c.early_stop;
  vopt.seed = derive_seed(r.seed, {"walk"});

  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (c.algorithm) {
      case Algorithm::kAs:
      case Algorithm::kAsIz:
        r.solution = {onedim::adaptive_sampling(sampler, guarantee)};
        break;
      case Algorithm::kEas:
        r.solution = {onedim::enhanced_adaptive_sampling(sampler, guarantee)};
        break;
      case Algorithm::kVaidya:
        r.solution = cutplane::stochastic_vaidya(sampler, guarantee, lipschitz, vopt);
        break;
      case Algorithm::kVaidyaAcc:
        r.solution = cutplane::accelerated_vaidya_iz(sampler, guarantee, lipschitz, vopt);
        break;
      case Algorithm::kDimred: {
        dimred::DimredOptions dopt;
        dopt.engine = c.engine;
        dopt.so_relax_factor = c.so_relax_factor;
        r.solution = dimred::dimension_reduction_solve(sampler, guarantee, dopt);
        break;
      }
      case Algorithm::kMultiEas:
        r.solution = multieas::solve_recursive(sampler, guarantee).witness;
        break;
      case Algorithm::kSubgradBaseline: {
        bench::BaselineOptions bopt;
        bopt.early_stop = c.early_stop;
        r.solution = bench::subgradient_baseline(sampler, guarantee, lipschitz, bopt);
        break;
      }
    }
  } catch (const std::exception& e) {
    r.solution.clear();
    r.error = e.what();
  }
  if (c.timing) {
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  r.total_samples = sampler.draws();

  if (separable) {
    if (r.solution.empty()) {
      r.success = false;
    } else {
      r.gap = separable->value(r.solution) - separable->value(separable->optimum);
      r.success = is_iz(c.algorithm) ? r.solution == separable->optimum : *r.gap <= *c.epsilon;
    }
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  validate(config);
  const auto reps = static_cast<std::size_t>(config.replications);
  const std::size_t jobs = config.sizes.size() * reps;
  ExperimentResult result;
  result.records.resize(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      result.records[i] = run_single(config, config.sizes[i / reps], static_cast<int>(i % reps));
    }
  };
  const int pool_size = std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
  std::vector<std::thread> pool;
  for (int t = 1; t < pool_size; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t b = 0; b < config.sizes.size(); ++b) {
    CostRow row;
    row.n = config.sizes[b];
    double sum = 0.0;
    double sum_sq = 0.0;
    int covered = 0;
    bool known = true;
    for (std::size_t k = 0; k < reps; ++k) {
      const auto& rec = result.records[b * reps + k];
      const auto cost = static_cast<double>(rec.total_samples);
      sum += cost;
      sum_sq += cost * cost;
      if (!rec.error.empty()) ++row.failures;
      if (!rec.success) {
        known = false;
      } else if (*rec.success) {
        ++covered;
      }
    }
    const double m = static_cast<double>(reps);
    row.mean_cost = sum / m;
    row.std_cost = reps > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / m) / (m - 1.0))) : 0.0;
    if (known) row.coverage_rate = covered / m;
    result.curve.push_back(row);
  }
  return result;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    std::string solution;
    for (std::size_t i = 0; i < r.solution.size(); ++i) {
      if (i) solution += ';';
      solution += std::to_string(r.solution[i]);
    }
    out << to_string(r.algorithm) << ',' << to_string(r.model) << ',' << r.d << ',' << r.n << ','
        << (r.epsilon ? fmt_double(*r.epsilon) : "") << ',' << fmt_double(r.delta) << ',' << r.replicate << ','
        << r.seed << ',' << r.total_samples << ',' << (r.wall_ms ? fmt_double(*r.wall_ms) : "") << ',' << solution
        << ',' << (r.gap ? fmt_double(*r.gap) : "") << ',' << (r.success ? (*r.success ? "1" : "0") : "") << '\n';
  }
}

void write_summary(std::ostream& out, const ExperimentResult& result) {
  out << "N,mean_cost,std_cost,coverage_rate,failures\n";
  for (const auto& row : result.curve) {
    out << row.n << ',' << fmt_double(row.mean_cost) << ',' << fmt_double(row.std_cost) << ','
        << (row.coverage_rate ? fmt_double(*row.coverage_rate) : "") << ',' << row.failures << '\n';
  }
}

std::vector<LandscapeRow> landscape_scan(const StochasticOracle& oracle, const std::vector<std::int64_t>& points,
                                         int replications, std::uint64_t master_seed, int threads) {
  if (oracle.dim() != 1) throw std::invalid_argument("landscape_scan: one-dimensional oracles only");
  if (replications < 1) throw std::invalid_argument("landscape_scan: need at least one replication");
  for (auto p : points) {
    const std::int64_t x[1] = {p};
    if (!oracle.contains(x)) throw std::invalid_argument("landscape_scan: point outside the grid");
  }
  std::vector<LandscapeRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const std::int64_t x[1] = {points[i]};
      Rng rng = seed_stream(master_seed, {"landscape", points[i]});
      double sum = 0.0;
      double sum_sq = 0.0;
      for (int k = 0; k < replications; ++k) {
        const double v = oracle.sample(x, rng);
        sum += v;
        sum_sq += v * v;
      }
      const double m = replications;
      const double mean = sum / m;
      const double var = replications > 1 ? std::max(0.0, (sum_sq - sum * mean) / (m - 1.0)) : 0.0;
      rows[i] = {points[i], mean, 1.96 * std::sqrt(var / m)};
    }
  };
  const int pool_size = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < pool_size; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_landscape_csv(std::ostream& out, const std::vector<LandscapeRow>& rows) {
  out << "x,mean,halfwidth\n";
  for (const auto& r : rows) out << r.x << ',' << fmt_double(r.mean) << ',' << fmt_double(r.half_width) << '\n';
}

}  // namespace cso::harness

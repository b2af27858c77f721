#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cso/cut_engine.hpp"
#include "cso/oracle.hpp"

namespace cso::harness {

enum class Algorithm { kAs, kAsIz, kEas, kVaidya, kVaidyaAcc, kDimred, kMultiEas, kSubgradBaseline };
enum class ModelKind { kSeparable, kQueue };

std::string to_string(Algorithm a);
std::string to_string(ModelKind m);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kEas;
  ModelKind model = ModelKind::kSeparable;
  int d = 1;
  std::vector<std::int64_t> sizes;  // one experiment block per N
  std::optional<double> epsilon;
  double delta = 1e-6;
  std::optional<double> iz_c;
  std::optional<double> lipschitz;  // unset with lipschitz_auto means "use the model's value"
  bool lipschitz_auto = false;
  int replications = 1;
  std::uint64_t master_seed = 0;
  cutplane::EngineKind engine = cutplane::EngineKind::kVaidya;
  std::string output_path;
  double noise_sigma = 1.0;     // separable model noise
  double queue_sigma2 = 10.0;   // variance proxy declared for the queue oracle
  double queue_horizon = 2.0;
  double so_relax_factor = 1.0;
  bool early_stop = false;
  bool timing = false;          // wall_ms stays empty unless set, so output is reproducible
};

/// Parses a JSON document. Unknown keys, bad values and incompatible combinations throw ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& config);

struct RunRecord {
  Algorithm algorithm = Algorithm::kEas;
  ModelKind model = ModelKind::kSeparable;
  int d = 1;
  std::int64_t n = 0;
  std::optional<double> epsilon;
  double delta = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t total_samples = 0;
  std::optional<double> wall_ms;
  GridPoint solution;          // empty when the run failed
  std::optional<double> gap;   // known only with ground truth
  std::optional<bool> success;
  std::string error;           // non-empty when the solver threw
};

struct CostRow {
  std::int64_t n = 0;
  double mean_cost = 0.0;
  double std_cost = 0.0;
  std::optional<double> coverage_rate;
  int failures = 0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by (N, replicate)
  std::vector<CostRow> curve;
};

/// Worker count: hardware concurrency, capped by CSO_THREADS when that is a positive integer.
int worker_count();

/// One solve. Solver exceptions are caught and stored in the record.
RunRecord run_single(const ExperimentConfig& config, std::int64_t n, int replicate);

ExperimentResult run_experiment(const ExperimentConfig& config, int threads = worker_count());

inline constexpr const char* kCsvHeader =
    "algorithm,model,d,N,epsilon,delta,replicate,seed,total_samples,wall_ms,solution,gap,success";

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_summary(std::ostream& out, const ExperimentResult& result);

struct LandscapeRow {
  std::int64_t x = 0;
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal interval from the sample standard deviation
};

/// Per-point means of `replications` draws, each point on its own derived stream.
std::vector<LandscapeRow> landscape_scan(const StochasticOracle& oracle, const std::vector<std::int64_t>& points,
                                         int replications, std::uint64_t master_seed,
                                         int threads = worker_count());

void write_landscape_csv(std::ostream& out, const std::vector<LandscapeRow>& rows);

}  // namespace cso::harness

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cso/oracle.hpp"
#include "cso/rng.hpp"

namespace cso::bench {

using RateFn = std::function<double(double)>;

/// Thinning: candidates at rate gamma_scale * rate_max, each kept with probability
/// rate(t) / rate_max. Returns sorted times in [0, horizon].
std::vector<double> nhpp_arrivals(const RateFn& rate, double rate_max, double gamma_scale, double horizon, Rng& rng);

struct QueueCounts {
  double time = 0.0;
  std::int64_t arrived = 0;
  std::int64_t waiting = 0;
  std::int64_t in_service = 0;
  std::int64_t served = 0;
};

struct FcfsResult {
  std::vector<double> service_start;  // indexed like the arrivals
  double total_wait = 0.0;
};

/// Multi-server FCFS queue with unlimited room, run until every customer is served.
/// `observer`, when set, sees the counts after each event.
FcfsResult simulate_fcfs(std::span<const double> arrivals, std::span<const double> services, std::int64_t servers,
                         const std::function<void(const QueueCounts&)>& observer = {});

/// Two staffed queues sharing a server budget of N + 1.
struct QueueModel {
  double horizon = 2.0;
  std::int64_t n = 150;
  double service_scale = 1.0;  // multiplies every service time; 0 forces instant service

  static double rate1(double t);
  static double rate2(double t);
  static constexpr double kRate1Max = 100.0;
  static constexpr double kRate2Max = 120.0;
  static constexpr double kLognormalMean = 0.75;
  static constexpr double kGammaShape = 4.225;
  static constexpr double kGammaScale = 0.1 / 0.65;
  static constexpr double kServiceVariance = 0.1;
};

/// One replication at staffing x: average wait over both arrival streams, 0 without arrivals.
double queue_sim_run(const QueueModel& model, std::int64_t x, Rng& rng);

class QueueOracle : public StochasticOracle {
 public:
  QueueOracle(QueueModel model, double sigma2) : model_(model), dims_{model.n}, sigma2_(sigma2) {}

  const std::vector<std::int64_t>& dims() const override { return dims_; }
  double sigma2() const override { return sigma2_; }
  /// Each call runs on a child stream keyed by one draw of `rng`.
  double sample(PointView x, Rng& rng) const override;

  const QueueModel& model() const { return model_; }

 private:
  QueueModel model_;
  std::vector<std::int64_t> dims_;
  double sigma2_;
};

}  // namespace cso::bench

#include "cso/queue.hpp"

#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>

namespace cso::bench {

std::vector<double> nhpp_arrivals(const RateFn& rate, double rate_max, double gamma_scale, double horizon, Rng& rng) {
  std::vector<double> times;
  if (!(gamma_scale > 0.0) || !(rate_max > 0.0) || !(horizon > 0.0)) return times;
  std::exponential_distribution<double> gap(gamma_scale * rate_max);
  double t = 0.0;
  while (true) {
    t += gap(rng);
    if (t > horizon) break;
    if (rng.uniform01() * rate_max < rate(t)) times.push_back(t);
  }
  return times;
}

namespace {

enum class EventKind { kDeparture = 0, kArrival = 1 };

// Departures sort before arrivals at equal times so a freed server is reused at once.
struct Event {
  double time;
  int order;
  std::uint64_t seq;
  std::size_t customer;
  bool operator>(const Event& o) const {
    return std::tie(time, order, seq) > std::tie(o.time, o.order, o.seq);
  }
};

}  // namespace

FcfsResult simulate_fcfs(std::span<const double> arrivals, std::span<const double> services, std::int64_t servers,
                         const std::function<void(const QueueCounts&)>& observer) {
  if (arrivals.size() != services.size()) throw std::invalid_argument("simulate_fcfs: size mismatch");
  if (servers < 1) throw std::invalid_argument("simulate_fcfs: need at least one server");
  FcfsResult out;
  out.service_start.assign(arrivals.size(), 0.0);
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::uint64_t seq = 0;
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    events.push({arrivals[i], static_cast<int>(EventKind::kArrival), seq++, i});
  }
  std::queue<std::size_t> line;
  QueueCounts counts;
  auto start = [&](std::size_t c, double now) {
    out.service_start[c] = now;
    out.total_wait += now - arrivals[c];
    ++counts.in_service;
    events.push({now + services[c], static_cast<int>(EventKind::kDeparture), seq++, c});
  };
  while (!events.empty()) {
    const Event e = events.top();
    events.pop();
    counts.time = e.time;
    if (e.order == static_cast<int>(EventKind::kArrival)) {
      ++counts.arrived;
      if (counts.in_service < servers) {
        start(e.customer, e.time);
      } else {
        line.push(e.customer);
        ++counts.waiting;
      }
    } else {
      --counts.in_service;
      ++counts.served;
      if (!line.empty()) {
        const auto next = line.front();
        line.pop();
        --counts.waiting;
        start(next, e.time);
      }
    }
    if (observer) observer(counts);
  }
  return out;
}

double QueueModel::rate1(double t) { return 75.0 + 25.0 * std::sin(0.3 * t); }
double QueueModel::rate2(double t) { return 80.0 + 40.0 * std::sin(0.2 * t); }

double queue_sim_run(const QueueModel& model, std::int64_t x, Rng& rng) {
  if (x < 1 || x > model.n) throw std::invalid_argument("queue_sim_run: staffing outside [1, N]");
  std::uniform_real_distribution<double> unit_scale(0.75, 1.25);
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  const double xs = unit_scale(rng);
  const double ys = unit_scale(rng);
  const double z = shift(rng);
  const double gamma1 = xs + z;
  const double gamma2 = ys - z;

  const auto arrivals1 = nhpp_arrivals(QueueModel::rate1, QueueModel::kRate1Max, gamma1, model.horizon, rng);
  const auto arrivals2 = nhpp_arrivals(QueueModel::rate2, QueueModel::kRate2Max, gamma2, model.horizon, rng);
  if (arrivals1.empty() && arrivals2.empty()) return 0.0;

  const double m = QueueModel::kLognormalMean;
  const double s2 = std::log1p(QueueModel::kServiceVariance / (m * m));
  std::lognormal_distribution<double> service1(std::log(m) - s2 / 2.0, std::sqrt(s2));
  std::gamma_distribution<double> service2(QueueModel::kGammaShape, QueueModel::kGammaScale);
  std::vector<double> s1(arrivals1.size());
  std::vector<double> s2v(arrivals2.size());
  for (auto& s : s1) s = model.service_scale * service1(rng);
  for (auto& s : s2v) s = model.service_scale * service2(rng);

  const double w1 = simulate_fcfs(arrivals1, s1, x).total_wait;
  const double w2 = simulate_fcfs(arrivals2, s2v, model.n + 1 - x).total_wait;
  return (w1 + w2) / static_cast<double>(arrivals1.size() + arrivals2.size());
}

double QueueOracle::sample(PointView x, Rng& rng) const {
  Rng child(rng());
  return queue_sim_run(model_, x[0], child);
}

}  // namespace cso::bench

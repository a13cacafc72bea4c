// SPDX-License-Identifier: Apache-2.0
#include "mg1/simulate.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "mg1/errors.hpp"

namespace mg1 {

void SimConfig::check() const {
  if (warmup_events < 0 || !(warmup_events < horizon_events)) {
    throw Error(ErrorKind::InvalidArgument, "need 0 <= warmup_events < horizon_events");
  }
  if (levels < 1) throw Error(ErrorKind::InvalidArgument, "levels must be at least 1");
}

SimulationResult simulate_queue(const QueueInstance& instance, const SimConfig& config) {
  config.check();
  if (!(instance.rho() < 1.0)) throw Error(ErrorKind::Unstable, "simulated queue must be stable");

  SimulationResult out;
  const int levels = config.levels;
  out.dist.probs.assign(levels, 0.0);
  if (instance.lambda <= 0.0) {
    out.dist.probs[0] = 1.0;
    return out;
  }

  Rng rng = Rng::derive(config.seed, {0x51u});
  constexpr double kNever = std::numeric_limits<double>::infinity();
  std::vector<double> occupancy(levels + 1, 0.0);
  std::deque<double> arrivals;  // arrival epochs of customers in system, FIFO

  double now = 0.0;
  double next_arrival = rng.exponential(instance.lambda);
  double next_departure = kNever;
  double window_start = 0.0;
  double area = 0.0;
  double sojourn_total = 0.0;
  long sojourn_count = 0;
  long window_arrivals = 0;

  for (long event = 0; event < config.horizon_events; ++event) {
    const bool measuring = event >= config.warmup_events;
    if (event == config.warmup_events) window_start = now;
    const double t = std::min(next_arrival, next_departure);
    const auto in_system = static_cast<long>(arrivals.size());
    if (measuring) {
      const double dt = t - now;
      occupancy[std::min<long>(in_system, levels)] += dt;
      area += dt * static_cast<double>(in_system);
    }
    now = t;
    if (next_arrival <= next_departure) {
      arrivals.push_back(now);
      if (measuring) ++window_arrivals;
      if (arrivals.size() == 1) next_departure = now + sample_variate(instance.service, rng);
      next_arrival = now + rng.exponential(instance.lambda);
    } else {
      const double arrived = arrivals.front();
      arrivals.pop_front();
      if (measuring && arrived >= window_start) {
        sojourn_total += now - arrived;
        ++sojourn_count;
      }
      next_departure = arrivals.empty() ? kNever : now + sample_variate(instance.service, rng);
    }
  }

  const double span = now - window_start;
  out.observed_time = span;
  if (span > 0.0) {
    for (int k = 0; k < levels; ++k) out.dist.probs[k] = occupancy[k] / span;
    out.dist.tail_mass = occupancy[levels] / span;
    out.mean_in_system = area / span;
    out.observed_arrival_rate = static_cast<double>(window_arrivals) / span;
  }
  out.mean_sojourn = sojourn_count > 0 ? sojourn_total / static_cast<double>(sojourn_count) : 0.0;
  return out;
}

std::vector<double> draw_service_sample(const PhaseType& ph, std::size_t count, Rng& rng) {
  std::vector<double> out(count);
  for (auto& x : out) x = sample_variate(ph, rng);
  return out;
}

double total_variation(const QueueLengthDistribution& a, const QueueLengthDistribution& b) {
  if (a.levels() != b.levels()) throw Error(ErrorKind::DimensionMismatch, "distributions differ in length");
  double l1 = std::abs(a.tail_mass - b.tail_mass);
  for (int k = 0; k < a.levels(); ++k) l1 += std::abs(a.probs[k] - b.probs[k]);
  return 0.5 * l1;
}

}  // namespace mg1

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "mg1/qbd.hpp"
#include "mg1/random.hpp"

namespace mg1 {

struct SimConfig {
  long warmup_events = 10'000;
  /// Total events simulated, warmup included. An event is an arrival or a departure.
  long horizon_events = 1'000'000;
  std::uint64_t seed = 42;
  int levels = kDefaultLevels;

  void check() const;
};

struct SimulationResult {
  /// Time-weighted occupancy over the measurement window; tail_mass is the
  /// fraction of time with at least `levels` customers present.
  QueueLengthDistribution dist;
  double mean_in_system = 0.0;
  /// Mean sojourn of customers arriving and departing inside the window.
  double mean_sojourn = 0.0;
  /// Arrivals per unit time over the window.
  double observed_arrival_rate = 0.0;
  double observed_time = 0.0;
};

/// Event-driven FIFO M/PH/1 simulation.
SimulationResult simulate_queue(const QueueInstance& instance, const SimConfig& config);

/// `count` independent service times.
std::vector<double> draw_service_sample(const PhaseType& ph, std::size_t count, Rng& rng);

/// Half the L1 distance between two queue-length laws, tail mass included as
/// one extra atom.
double total_variation(const QueueLengthDistribution& a, const QueueLengthDistribution& b);

}  // namespace mg1

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mg1/linalg.hpp"
#include "mg1/phtype.hpp"

namespace mg1 {

/// An M/PH/1 system: Poisson arrivals at rate lambda, PH service.
struct QueueInstance {
  double lambda = 0.0;
  PhaseType service;

  double rho() const { return lambda * service.mean(); }
};

/// P(N = 0) .. P(N = l-1), plus the exact mass beyond the last entry.
struct QueueLengthDistribution {
  std::vector<double> probs;
  double tail_mass = 0.0;

  int levels() const { return static_cast<int>(probs.size()); }
};

inline constexpr int kDefaultLevels = 70;
inline constexpr double kDefaultTailEpsilon = 1e-9;

struct SolveOptions {
  int levels = kDefaultLevels;
  double epsilon = kDefaultTailEpsilon;
  /// When false the distribution is returned whatever its tail mass.
  bool enforce_tail = true;
  double tolerance = 1e-13;
  long max_iterations = 1'000'000;
};

/// Matrix-geometric solution of the M/PH/1 QBD. Keeps the rate matrix and
/// the boundary vectors so that closed-form tail quantities can be derived.
struct QbdSolution {
  QueueLengthDistribution dist;
  Matrix rate;          ///< R, minimal nonnegative solution of A0 + R A1 + R^2 A2 = 0
  double empty_prob;    ///< pi_0
  RowVector level_one;  ///< pi_1; pi_{n+1} = pi_n R
  long iterations;
  double boundary_residual;
};

/// Stationary queue-length distribution of the M/PH/1 queue.
///
/// Levels n >= 1 carry the service phase. Blocks: A0 = lambda I,
/// A1 = S - lambda I, A2 = s0 alpha; boundary B00 = -lambda, B01 = lambda
/// alpha, B10 = s0. R is found by successive substitution from R = 0.
///
/// Throws Unstable (rho >= 1), NoConvergence, and TailTooHeavy when
/// enforce_tail is set and the mass beyond levels-1 exceeds epsilon.
QbdSolution solve(const QueueInstance& instance, const SolveOptions& options = {});

/// Exact E[N], including the geometric tail beyond the truncation point.
double mean_queue_length(const QbdSolution& solution);

/// Pollaczek-Khinchine mean number in system: rho + rho^2 (1 + cv2) / (2 (1 - rho)).
double pollaczek_khinchine_mean(double lambda, double mean_service, double second_moment);

}  // namespace mg1

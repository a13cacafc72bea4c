// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mg1/linalg.hpp"
#include "mg1/random.hpp"

namespace mg1 {

/// Continuous phase-type distribution PH(alpha, S): the absorption time of a
/// CTMC with m transient phases, initial law alpha and sub-generator S.
///
/// Instances only exist in validated form (see `validate`), are immutable, and
/// are safe to share between threads.
class PhaseType {
 public:
  /// Checks every representation invariant and returns the validated value.
  ///
  /// Throws Error with kind DimensionMismatch, NegativeProbability,
  /// BadDiagonal, PositiveRowSum or SingularGenerator. SingularGenerator is
  /// also the signal for an infinite mean (a livelocked chain).
  static PhaseType validate(Vector alpha, Matrix generator);

  int phases() const noexcept { return static_cast<int>(alpha_.size()); }
  const Vector& alpha() const noexcept { return alpha_; }
  const Matrix& generator() const noexcept { return generator_; }
  /// s0 = -S 1, the absorption rate out of each phase.
  const Vector& exit_rates() const noexcept { return exit_rates_; }
  double mean() const noexcept { return mean_; }

  /// P(X <= t) = 1 - alpha exp(S t) 1.
  double cdf(double t) const;
  /// Smallest t with cdf(t) >= p, found by bisection to relative accuracy rel_tol.
  double quantile(double p, double rel_tol = 1e-9) const;

 private:
  friend double sample_variate(const PhaseType& ph, Rng& rng);

  PhaseType() = default;

  Vector alpha_;
  Matrix generator_;
  Vector exit_rates_;
  double mean_ = 0.0;

  // Jump chain tables for sample_variate: cumulative probabilities of moving
  // to phase j (j < m) or absorbing (index m) when leaving each phase.
  std::vector<double> initial_cdf_;
  std::vector<std::vector<double>> jump_cdf_;
  std::vector<double> holding_rate_;
};

inline constexpr double kProbabilityTolerance = 1e-12;

/// Raw moments [E X, E X^2, ..., E X^k_max] via E X^k = k! alpha (-S)^-k 1,
/// computed by repeated solves against -S.
std::vector<double> moments(const PhaseType& ph, int k_max);

/// Rescales time so the mean is one: S' = mean * S, alpha unchanged.
PhaseType scale_to_unit_mean(const PhaseType& ph);

/// One absorption time, generated by walking the phase path.
double sample_variate(const PhaseType& ph, Rng& rng);

/// Text record `{"m":..,"alpha":[..],"S":[[..],..]}` on a single line.
std::string to_json_line(const PhaseType& ph);
/// Parses and validates a record produced by to_json_line.
PhaseType parse_phase_type(std::string_view text);
/// Reads the first record of a PH file (one record per line).
PhaseType load_phase_type(const std::string& path);

}  // namespace mg1

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mg1/metrics.hpp"
#include "mg1/mlp.hpp"
#include "mg1/phtype.hpp"

namespace mg1 {

/// Sample raw moments (1/N) sum x^k for k = 1..k_max. Throws
/// NonPositiveSample if any value is <= 0 or not finite.
std::vector<double> estimate_raw_moments(std::span<const double> sample, int k_max);

/// Reads one positive real per line.
std::vector<double> load_service_sample(const std::string& path);

struct CaseStudyResult {
  std::vector<double> estimated_moments;  ///< raw moments 1..5 of the data
  double mean_service = 0.0;
  double scaled_lambda = 0.0;  ///< lambda * mean: utilization fed to the model
  std::vector<double> prediction;
  /// Filled only when a ground-truth service law is supplied.
  std::optional<std::vector<double>> truth_moments;
  std::optional<QueueLengthDistribution> truth;
  std::optional<double> metric1;
  /// NaN where the percentile lies beyond the mass covered by the truth or the prediction.
  std::vector<std::pair<double, Metric2Result>> metric2;
};

/// Predicts the queue-length law of an M/G/1 queue with arrival rate lambda
/// whose service law is known only through `sample`. The model works on
/// unit-mean services, so it is fed lambda * mean and m_k / mean^k.
CaseStudyResult case_study(std::span<const double> sample, double lambda, const MlpModel& model,
                           const PhaseType* ground_truth = nullptr);

}  // namespace mg1

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "mg1/linalg.hpp"

namespace mg1 {

inline constexpr std::array<double, 6> kReportPercentiles{0.25, 0.50, 0.75, 0.90, 0.99, 0.999};

/// L1 distance of each row pair.
std::vector<double> per_row_l1(const Matrix& y, const Matrix& yhat);

/// Mean over rows of the L1 distance between true and predicted laws.
double metric1(const Matrix& y, const Matrix& yhat);

/// Smallest k with sum_{j<=k} dist[j] >= p. Throws PercentileBeyondTruncation
/// when p exceeds the mass covered by dist.
int percentile_inverse(std::span<const double> dist, double p);

struct Metric2Result {
  double value = 0.0;
  /// Rows whose true percentile is 0 and were divided by 1 instead.
  long zero_denominator_rows = 0;
};

/// Mean relative error of the p-th percentile of the queue length,
/// |F_y^-1(p) - F_yhat^-1(p)| / F_y^-1(p). With signed_variant the numerator
/// keeps its sign. A zero true percentile uses denominator 1.
Metric2Result metric2(const Matrix& y, const Matrix& yhat, double p, bool signed_variant = false);

struct EvalReport {
  double metric1_mean = 0.0;
  std::vector<std::pair<double, double>> metric1_percentiles;
  std::vector<std::pair<double, Metric2Result>> metric2;
  std::vector<double> per_sample_metric1;
};

EvalReport evaluate(const Matrix& y, const Matrix& yhat,
                    std::span<const double> percentiles = kReportPercentiles);

/// Linear-interpolated empirical quantile (values need not be sorted).
double empirical_quantile(std::vector<double> values, double q);

void write_report(std::ostream& out, const EvalReport& report);
/// `bin_lo,bin_hi,count` rows over [0, max] with `bins` equal-width bins.
void write_histogram_csv(std::ostream& out, std::span<const double> values, int bins = 50);

}  // namespace mg1

// SPDX-License-Identifier: Apache-2.0
#include "mg1/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "mg1/errors.hpp"

namespace mg1 {

namespace {

void check_shapes(const Matrix& y, const Matrix& yhat) {
  if (y.rows() != yhat.rows() || y.cols() != yhat.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "prediction shape differs from target shape");
  }
}

int row_percentile(const Matrix& m, Eigen::Index row, double p) {
  const Vector r = m.row(row).transpose();
  return percentile_inverse(std::span<const double>(r.data(), static_cast<std::size_t>(r.size())), p);
}

}  // namespace

std::vector<double> per_row_l1(const Matrix& y, const Matrix& yhat) {
  check_shapes(y, yhat);
  std::vector<double> out(static_cast<std::size_t>(y.rows()));
  for (Eigen::Index i = 0; i < y.rows(); ++i) out[i] = (y.row(i) - yhat.row(i)).cwiseAbs().sum();
  return out;
}

double metric1(const Matrix& y, const Matrix& yhat) {
  check_shapes(y, yhat);
  if (y.rows() == 0) return 0.0;
  return (y - yhat).cwiseAbs().sum() / static_cast<double>(y.rows());
}

int percentile_inverse(std::span<const double> dist, double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "percentile level must be in (0,1)");
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    acc += dist[k];
    if (acc >= p) return static_cast<int>(k);
  }
  throw Error(ErrorKind::PercentileBeyondTruncation,
              "level " + std::to_string(p) + " exceeds covered mass " + std::to_string(acc));
}

Metric2Result metric2(const Matrix& y, const Matrix& yhat, double p, bool signed_variant) {
  check_shapes(y, yhat);
  Metric2Result out;
  if (y.rows() == 0) return out;
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const int truth = row_percentile(y, i, p);
    const int pred = row_percentile(yhat, i, p);
    double diff = static_cast<double>(truth - pred);
    if (!signed_variant) diff = std::abs(diff);
    double denom = truth;
    if (truth == 0) {
      denom = 1.0;
      ++out.zero_denominator_rows;
    }
    total += diff / denom;
  }
  out.value = total / static_cast<double>(y.rows());
  return out;
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

EvalReport evaluate(const Matrix& y, const Matrix& yhat, std::span<const double> percentiles) {
  EvalReport report;
  report.per_sample_metric1 = per_row_l1(y, yhat);
  report.metric1_mean = metric1(y, yhat);
  for (double p : percentiles) {
    report.metric1_percentiles.emplace_back(p, empirical_quantile(report.per_sample_metric1, p));
    report.metric2.emplace_back(p, metric2(y, yhat, p));
  }
  return report;
}

void write_report(std::ostream& out, const EvalReport& report) {
  auto label = [](double p) {
    std::ostringstream s;
    s << p * 100.0 << '%';
    return s.str();
  };
  out << "metric1_mean " << std::setprecision(6) << report.metric1_mean << '\n';
  out << "samples " << report.per_sample_metric1.size() << '\n';
  out << "percentile";
  for (const auto& [p, v] : report.metric1_percentiles) out << '\t' << label(p);
  out << "\nmetric1";
  for (const auto& [p, v] : report.metric1_percentiles) out << '\t' << v;
  out << "\nmetric2";
  for (const auto& [p, v] : report.metric2) out << '\t' << v.value;
  out << "\nmetric2_zero_denominator_rows";
  for (const auto& [p, v] : report.metric2) out << '\t' << v.zero_denominator_rows;
  out << '\n';
}

void write_histogram_csv(std::ostream& out, std::span<const double> values, int bins) {
  out << "bin_lo,bin_hi,count\n";
  if (values.empty() || bins < 1) return;
  const double top = *std::max_element(values.begin(), values.end());
  const double width = top > 0.0 ? top / bins : 1.0;
  std::vector<long> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<int>(v / width);
    counts[std::clamp(b, 0, bins - 1)]++;
  }
  out << std::setprecision(9);
  for (int b = 0; b < bins; ++b) out << b * width << ',' << (b + 1) * width << ',' << counts[b] << '\n';
}

}  // namespace mg1

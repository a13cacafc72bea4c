// SPDX-License-Identifier: Apache-2.0
#include "mg1/case_study.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "mg1/dataset.hpp"
#include "mg1/errors.hpp"
#include "mg1/qbd.hpp"

namespace mg1 {

std::vector<double> estimate_raw_moments(std::span<const double> sample, int k_max) {
  if (sample.empty()) throw Error(ErrorKind::NonPositiveSample, "empty service sample");
  if (k_max < 1) throw Error(ErrorKind::InvalidArgument, "k_max must be at least 1");
  std::vector<double> sums(static_cast<std::size_t>(k_max), 0.0);
  for (double x : sample) {
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::NonPositiveSample, "service times must be positive");
    double power = 1.0;
    for (auto& s : sums) {
      power *= x;
      s += power;
    }
  }
  for (auto& s : sums) s /= static_cast<double>(sample.size());
  return sums;
}

std::vector<double> load_service_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(line, &used));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, path + ": bad value '" + line + "'");
    }
  }
  return out;
}

CaseStudyResult case_study(std::span<const double> sample, double lambda, const MlpModel& model,
                           const PhaseType* ground_truth) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "arrival rate must be nonnegative");
  const int n = model.n_moments;
  CaseStudyResult out;
  out.estimated_moments = estimate_raw_moments(sample, std::max(n, 5));
  out.mean_service = out.estimated_moments[0];
  out.scaled_lambda = lambda * out.mean_service;

  std::vector<double> normalized(static_cast<std::size_t>(n));
  double scale = 1.0;
  for (int k = 0; k < n; ++k) {
    scale *= out.mean_service;
    normalized[static_cast<std::size_t>(k)] = out.estimated_moments[static_cast<std::size_t>(k)] / scale;
  }
  out.prediction = model.predict(raw_features(out.scaled_lambda, normalized));

  if (ground_truth) {
    out.truth_moments = moments(*ground_truth, std::max(n, 5));
    SolveOptions options;
    options.levels = model.output_dim();
    options.enforce_tail = false;
    const QbdSolution sol = solve(QueueInstance{lambda, *ground_truth}, options);
    out.truth = sol.dist;
    const Matrix y = Eigen::Map<const RowVector>(sol.dist.probs.data(), options.levels);
    const Matrix yhat = Eigen::Map<const RowVector>(out.prediction.data(), options.levels);
    out.metric1 = metric1(y, yhat);
    for (double p : kReportPercentiles) {
      try {
        out.metric2.emplace_back(p, metric2(y, yhat, p));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PercentileBeyondTruncation) throw;
        out.metric2.emplace_back(p, Metric2Result{std::numeric_limits<double>::quiet_NaN(), 0});
      }
    }
  }
  return out;
}

}  // namespace mg1

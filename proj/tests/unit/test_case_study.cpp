// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "builders.hpp"
#include "mg1/case_study.hpp"
#include "mg1/errors.hpp"
#include "mg1/simulate.hpp"

namespace {

TEST(EstimateRawMoments, ExponentialWithinThreeStandardErrors) {
  mg1::Rng rng(2718);
  const auto x = mg1::draw_service_sample(mg1::test::exponential(1.0), 50000, rng);
  const auto m = mg1::estimate_raw_moments(x, 5);
  // Var(X^k) = (2k)! - (k!)^2 for Exp(1).
  const double fact[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800};
  for (int k = 1; k <= 5; ++k) {
    const double se = std::sqrt((fact[2 * k] - fact[k] * fact[k]) / 50000.0);
    EXPECT_NEAR(m[k - 1], fact[k], 3.0 * se) << "k=" << k;
  }
}

TEST(EstimateRawMoments, ConstantSampleIsFine) {
  const std::vector<double> x(10, 2.0);
  const auto m = mg1::estimate_raw_moments(x, 5);
  for (int k = 1; k <= 5; ++k) EXPECT_DOUBLE_EQ(m[k - 1], std::pow(2.0, k));
}

TEST(EstimateRawMoments, NonPositiveRejected) {
  const std::vector<double> x{1.0, 0.0, 2.0};
  try {
    (void)mg1::estimate_raw_moments(x, 5);
    FAIL();
  } catch (const mg1::Error& e) {
    EXPECT_EQ(e.kind(), mg1::ErrorKind::NonPositiveSample);
  }
}

TEST(CaseStudy, RescalesLambdaAndReportsTruth) {
  const auto truth = mg1::test::exponential(2.0);  // mean 0.5
  mg1::Rng rng(1);
  const auto sample = mg1::draw_service_sample(truth, 20000, rng);
  auto model = mg1::MlpModel::zeros(mg1::default_layer_dims(5));
  model.feature_stats.mean.assign(5, 0.0);
  model.feature_stats.std.assign(5, 1.0);
  model.n_moments = 5;
  const auto res = mg1::case_study(sample, 1.0, model, &truth);
  EXPECT_NEAR(res.scaled_lambda, 0.5, 0.02);
  EXPECT_NEAR(res.scaled_lambda, 1.0 * res.mean_service, 1e-15);
  ASSERT_TRUE(res.truth.has_value());
  EXPECT_NEAR(res.truth->probs[0], 0.5, 1e-10);
  ASSERT_TRUE(res.metric1.has_value());
  EXPECT_GT(*res.metric1, 0.0);
  EXPECT_EQ(res.metric2.size(), 6u);
  for (double p : res.prediction) EXPECT_DOUBLE_EQ(p, 1.0 / 70.0);
}

}  // namespace

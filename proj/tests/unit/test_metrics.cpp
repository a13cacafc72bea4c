// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include "mg1/errors.hpp"
#include "mg1/metrics.hpp"
#include "oracles.hpp"

namespace {

mg1::Matrix row(const std::vector<double>& v) {
  mg1::Matrix m(1, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

mg1::Matrix geometric_row(double rho) { return row(mg1::oracle::geometric_law(rho, 70)); }

TEST(Metric1, Examples) {
  const auto y = geometric_row(0.5);
  EXPECT_EQ(mg1::metric1(y, y), 0.0);
  std::vector<double> a(70, 0.0), b(70, 0.0);
  a[0] = 1.0;
  b[1] = 1.0;
  EXPECT_DOUBLE_EQ(mg1::metric1(row(a), row(b)), 2.0);
}

TEST(Metric1, SymmetricAndShapeChecked) {
  const auto a = geometric_row(0.3);
  const auto b = geometric_row(0.6);
  EXPECT_DOUBLE_EQ(mg1::metric1(a, b), mg1::metric1(b, a));
  EXPECT_THROW(mg1::metric1(a, mg1::Matrix::Zero(1, 69)), mg1::Error);
}

TEST(PercentileInverse, GeometricLaw) {
  const auto d = mg1::oracle::geometric_law(0.5, 70);
  EXPECT_EQ(mg1::percentile_inverse(d, 0.5), 0);
  EXPECT_EQ(mg1::percentile_inverse(d, 0.9), 3);
  int last = 0;
  for (double p = 0.01; p < 0.999; p += 0.01) {
    const int k = mg1::percentile_inverse(d, p);
    EXPECT_GE(k, last);
    last = k;
  }
}

TEST(PercentileInverse, BeyondTruncation) {
  const auto d = mg1::oracle::geometric_law(0.9, 70);  // covered mass 1 - 0.9^70
  try {
    (void)mg1::percentile_inverse(d, 0.9999);
    FAIL();
  } catch (const mg1::Error& e) {
    EXPECT_EQ(e.kind(), mg1::ErrorKind::PercentileBeyondTruncation);
  }
}

TEST(Metric2, IdentityIsZero) {
  const auto y = geometric_row(0.8);
  for (double p : mg1::kReportPercentiles) EXPECT_EQ(mg1::metric2(y, y, p).value, 0.0);
}

TEST(Metric2, RelativeErrorExample) {
  std::vector<double> truth(70, 0.0), pred(70, 0.0);
  truth[8] = 1.0;
  pred[7] = 1.0;
  EXPECT_DOUBLE_EQ(mg1::metric2(row(truth), row(pred), 0.9).value, 0.125);
  EXPECT_DOUBLE_EQ(mg1::metric2(row(truth), row(pred), 0.9, true).value, 0.125);
  EXPECT_DOUBLE_EQ(mg1::metric2(row(pred), row(truth), 0.9, true).value, -1.0 / 7.0);
}

TEST(Metric2, ZeroDenominatorGuard) {
  std::vector<double> truth(70, 0.0), pred(70, 0.0);
  truth[0] = 1.0;
  pred[2] = 1.0;
  const auto r = mg1::metric2(row(truth), row(pred), 0.25);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_EQ(r.zero_denominator_rows, 1);
}

TEST(Evaluate, ReportLayout) {
  mg1::Matrix y(2, 70), yhat(2, 70);
  y.row(0) = geometric_row(0.5).row(0);
  y.row(1) = geometric_row(0.3).row(0);
  yhat = y;
  yhat.row(1) = geometric_row(0.35).row(0);
  const auto rep = mg1::evaluate(y, yhat);
  EXPECT_NEAR(rep.metric1_mean, mg1::metric1(y, yhat), 1e-15);
  ASSERT_EQ(rep.per_sample_metric1.size(), 2u);
  EXPECT_EQ(rep.per_sample_metric1[0], 0.0);
  EXPECT_EQ(rep.metric2.size(), 6u);
  std::ostringstream out;
  mg1::write_report(out, rep);
  EXPECT_NE(out.str().find("metric1_mean"), std::string::npos);
  std::ostringstream hist;
  mg1::write_histogram_csv(hist, rep.per_sample_metric1, 5);
  EXPECT_FALSE(hist.str().empty());
}

TEST(EmpiricalQuantile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(mg1::empirical_quantile({3.0, 1.0, 2.0}, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(mg1::empirical_quantile({0.0, 10.0}, 0.25), 2.5);
}

}  // namespace

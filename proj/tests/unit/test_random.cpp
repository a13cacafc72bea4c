// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mg1/random.hpp"

namespace {

TEST(Rng, DeriveIsCounterBased) {
  mg1::Rng a = mg1::Rng::derive(42, {1, 2});
  mg1::Rng b = mg1::Rng::derive(42, {1, 2});
  mg1::Rng c = mg1::Rng::derive(42, {2, 1});
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}

TEST(Rng, UniformStaysInOpenInterval) {
  mg1::Rng rng(7);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, UniformIntCoversClosedRange) {
  mg1::Rng rng(3);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 10000; ++i) ++hits[rng.uniform_int(2, 6) - 2];
  for (int h : hits) EXPECT_GT(h, 1700);
}

TEST(Gamma, MeanAndVarianceMatchShape) {
  for (double shape : {0.3, 1.0, 2.5}) {
    mg1::Rng rng(11);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = mg1::sample_gamma(rng, shape);
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, shape, 4.0 * std::sqrt(shape / n)) << "shape " << shape;
    EXPECT_NEAR(var, shape, 0.05 * shape + 0.01) << "shape " << shape;
  }
}

TEST(Gamma, LogVariateFiniteForTinyShape) {
  mg1::Rng rng(5);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(std::isfinite(mg1::sample_log_gamma(rng, 1e-3)));
}

TEST(Dirichlet, SumsToOneAndMatchesMean) {
  mg1::Rng rng(9);
  const std::vector<double> conc{0.5, 1.0, 2.5};
  std::vector<double> acc(3, 0.0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto w = mg1::sample_dirichlet(rng, conc);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(w[k], 0.0);
      acc[k] += w[k];
    }
  }
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(acc[k] / n, conc[k] / 4.0, 0.01);
}

TEST(Dirichlet, SmallConcentrationsStayNormalized) {
  mg1::Rng rng(13);
  for (int i = 0; i < 2000; ++i) {
    const auto w = mg1::sample_dirichlet(rng, std::vector<double>{1e-3, 1e-3, 1e-3});
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Binomial, MeanMatches) {
  mg1::Rng rng(17);
  long total = 0;
  for (int i = 0; i < 20000; ++i) total += mg1::sample_binomial(rng, 10, 0.3);
  EXPECT_NEAR(total / 20000.0, 3.0, 0.05);
}

TEST(ChooseWithoutReplacement, DistinctMembers) {
  mg1::Rng rng(19);
  for (int i = 0; i < 500; ++i) {
    auto pick = mg1::choose_without_replacement(rng, {3, 5, 7, 9, 11}, 3);
    ASSERT_EQ(pick.size(), 3u);
    std::sort(pick.begin(), pick.end());
    EXPECT_EQ(std::adjacent_find(pick.begin(), pick.end()), pick.end());
    for (int v : pick) EXPECT_EQ(v % 2, 1);
  }
}

}  // namespace

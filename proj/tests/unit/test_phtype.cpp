// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "builders.hpp"
#include "mg1/errors.hpp"
#include "mg1/phtype.hpp"
#include "mg1/sampler.hpp"
#include "oracles.hpp"

namespace {

using mg1::ErrorKind;
using mg1::test::erlang2;
using mg1::test::exponential;
using mg1::test::make_ph;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const mg1::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected mg1::Error";
  return ErrorKind::InvalidArgument;
}

TEST(PhaseTypeValidate, AcceptsSmallExamples) {
  const auto e = exponential(1.0);
  EXPECT_EQ(e.phases(), 1);
  EXPECT_DOUBLE_EQ(e.mean(), 1.0);
  const auto two = make_ph({1.0, 0.0}, {{-2.0, 1.0}, {0.0, -3.0}});
  EXPECT_EQ(two.phases(), 2);
  EXPECT_NEAR(two.exit_rates()(0), 1.0, 1e-15);
  EXPECT_NEAR(two.exit_rates()(1), 3.0, 1e-15);
}

TEST(PhaseTypeValidate, RejectsBadInputs) {
  EXPECT_EQ(kind_of([] { make_ph({0.5, 0.5}, {{-1.0, 1.0}, {1.0, -1.0}}); }), ErrorKind::SingularGenerator);
  EXPECT_EQ(kind_of([] { make_ph({1.0, 0.0}, {{-1.0}}); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { make_ph({1.2, -0.2}, {{-1.0, 0.0}, {0.0, -1.0}}); }), ErrorKind::NegativeProbability);
  EXPECT_EQ(kind_of([] { make_ph({1.0}, {{0.0}}); }), ErrorKind::BadDiagonal);
  EXPECT_EQ(kind_of([] { make_ph({1.0, 0.0}, {{-1.0, 2.0}, {0.0, -1.0}}); }), ErrorKind::PositiveRowSum);
  EXPECT_EQ(kind_of([] { make_ph({1.0, 0.0}, {{-1.0, -0.5}, {0.0, -1.0}}); }), ErrorKind::BadDiagonal);
}

TEST(Moments, ExponentialFactorials) {
  const auto m = mg1::moments(exponential(1.0), 5);
  const double expected[] = {1, 2, 6, 24, 120};
  ASSERT_EQ(m.size(), 5u);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(m[k], expected[k], 1e-12 * expected[k]);
}

TEST(Moments, Erlang2AgainstNumericIntegration) {
  const auto m = mg1::moments(erlang2(2.0), 5);
  const double frozen[] = {1.0, 1.5, 3.0, 7.5, 22.5};
  for (int k = 1; k <= 5; ++k) {
    const double integral = mg1::oracle::simpson(
        [k](double t) { return std::pow(t, k) * mg1::oracle::erlang_pdf(2, 2.0, t); }, 0.0, 80.0, 40000);
    EXPECT_NEAR(integral, frozen[k - 1], 1e-8 * frozen[k - 1]) << "oracle k=" << k;
    EXPECT_NEAR(m[k - 1], frozen[k - 1], 1e-12 * frozen[k - 1]) << "k=" << k;
  }
}

TEST(ScaleToUnitMean, Examples) {
  const auto e = mg1::scale_to_unit_mean(exponential(4.0));
  EXPECT_NEAR(e.generator()(0, 0), -1.0, 1e-15);
  const auto same = mg1::scale_to_unit_mean(exponential(1.0));
  EXPECT_EQ(same.generator(), exponential(1.0).generator());
  const auto erl = mg1::scale_to_unit_mean(erlang2(1.0));
  EXPECT_NEAR((erl.generator() - erlang2(2.0).generator()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(ScaleToUnitMean, SampledDrawsHaveUnitMean) {
  mg1::SamplerConfig cfg;
  for (std::uint64_t i = 0; i < 200; ++i) {
    mg1::Rng rng = mg1::Rng::derive(1, {i});
    const auto ph = mg1::scale_to_unit_mean(mg1::sample_ph(cfg, rng));
    EXPECT_NEAR(mg1::moments(ph, 1)[0], 1.0, 1e-12);
  }
}

TEST(SampleVariate, ExponentialMean) {
  mg1::Rng rng(2024);
  const auto ph = exponential(1.0);
  double s = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) s += mg1::sample_variate(ph, rng);
  EXPECT_GE(s / n, 0.99);
  EXPECT_LE(s / n, 1.01);
}

TEST(SampleVariate, Erlang2SecondMoment) {
  mg1::Rng rng(2025);
  const auto ph = erlang2(2.0);
  double s2 = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double x = mg1::sample_variate(ph, rng);
    s2 += x * x;
  }
  EXPECT_GE(s2 / n, 1.48);
  EXPECT_LE(s2 / n, 1.52);
}

TEST(SampleVariate, SameSeedSameSequence) {
  const auto ph = make_ph({0.3, 0.7}, {{-2.0, 1.0}, {0.5, -3.0}});
  mg1::Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(mg1::sample_variate(ph, a), mg1::sample_variate(ph, b));
}

TEST(SampleVariate, KolmogorovSmirnovAgainstCdf) {
  mg1::SamplerConfig cfg;
  cfg.max_ph = 6;
  mg1::Rng draw = mg1::Rng::derive(5, {0});
  const auto ph = mg1::scale_to_unit_mean(mg1::sample_ph(cfg, draw));
  mg1::Rng rng(31);
  const int n = 4000;
  std::vector<double> x(n);
  for (auto& v : x) v = mg1::sample_variate(ph, rng);
  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = ph.cdf(x[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  EXPECT_LT(d, 1.63 / std::sqrt(n));  // 1% critical value
}

TEST(Cdf, ExponentialClosedForm) {
  const auto ph = exponential(2.0);
  for (double t : {0.0, 0.1, 1.0, 3.0}) EXPECT_NEAR(ph.cdf(t), 1.0 - std::exp(-2.0 * t), 1e-12);
  EXPECT_NEAR(ph.quantile(0.5), std::log(2.0) / 2.0, 1e-9);
}

TEST(JsonRecord, RoundTripIsExact) {
  const auto ph = make_ph({0.25, 0.75}, {{-1.0 / 3.0, 0.1}, {0.0, -7.123456789}});
  const auto back = mg1::parse_phase_type(mg1::to_json_line(ph));
  EXPECT_EQ(back.alpha(), ph.alpha());
  EXPECT_EQ(back.generator(), ph.generator());
}

TEST(JsonRecord, MalformedInputIsParseError) {
  EXPECT_EQ(kind_of([] { mg1::parse_phase_type("{\"m\":1,"); }), ErrorKind::ParseError);
}

}  // namespace

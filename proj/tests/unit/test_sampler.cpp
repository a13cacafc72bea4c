// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mg1/errors.hpp"
#include "mg1/phtype.hpp"
#include "mg1/sampler.hpp"

namespace {

TEST(StateTypes, SingleStateIsAbsorbing) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    mg1::Rng rng(s);
    const auto t = mg1::sample_state_types(1, rng);
    EXPECT_TRUE(t.non_absorbing.empty());
    EXPECT_EQ(t.full_absorbing.size() + t.partial_absorbing.size(), 1u);
  }
}

TEST(StateTypes, PartitionOfStates) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    mg1::Rng rng(s);
    const auto t = mg1::sample_state_types(10, rng);
    std::set<int> all;
    for (const auto* v : {&t.full_absorbing, &t.partial_absorbing, &t.non_absorbing}) all.insert(v->begin(), v->end());
    EXPECT_EQ(all.size(), 10u);
    EXPECT_EQ(t.full_absorbing.size() + t.partial_absorbing.size() + t.non_absorbing.size(), 10u);
    EXPECT_EQ(*all.begin(), 0);
    EXPECT_EQ(*all.rbegin(), 9);
  }
}

TEST(StateTypes, EveryCategoryAppearsBeyondFirstState) {
  int counts[3] = {0, 0, 0};
  for (std::uint64_t s = 0; s < 10000; ++s) {
    mg1::Rng rng = mg1::Rng::derive(3, {s});
    const auto t = mg1::sample_state_types(5, rng);
    for (int j = 1; j < 5; ++j) ++counts[static_cast<int>(t.type_of(j))];
  }
  for (int c : counts) EXPECT_GT(c, 0);
}

TEST(SampleClass, SingleStateIsExponential) {
  mg1::SamplerConfig cfg;
  for (std::uint64_t s = 0; s < 200; ++s) {
    mg1::Rng rng(s);
    const auto c = mg1::sample_class(1, cfg, rng);
    ASSERT_EQ(c.generator.rows(), 1);
    EXPECT_EQ(c.alpha(0), 1.0);
    EXPECT_GE(-c.generator(0, 0), cfg.rate_lo);
    EXPECT_LE(-c.generator(0, 0), cfg.rate_hi);
  }
}

TEST(SampleClass, RowScalingFollowsStateType) {
  mg1::SamplerConfig cfg;
  int seen_partial = 0, seen_non = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    mg1::Rng rng = mg1::Rng::derive(8, {s});
    const auto c = mg1::sample_class(3, cfg, rng);
    EXPECT_NEAR(c.alpha.sum(), 1.0, 1e-12);
    for (int j = 0; j < 3; ++j) {
      const double diag = c.generator(j, j);
      const double off = c.generator.row(j).sum() - diag;
      switch (c.typing.type_of(j)) {
        case mg1::StateType::NonAbsorbing:
          EXPECT_NEAR(c.generator.row(j).sum(), 0.0, 1e-9 * std::abs(diag));
          ++seen_non;
          break;
        case mg1::StateType::PartialAbsorbing:
          if (off > 0.0) {
            EXPECT_NEAR(-off / diag, 1.0 - c.absorb_prob.at(j), 1e-9);
            ++seen_partial;
          }
          break;
        case mg1::StateType::FullAbsorbing:
          EXPECT_EQ(off, 0.0);
          break;
      }
    }
  }
  EXPECT_GT(seen_partial, 0);
  EXPECT_GT(seen_non, 0);
}

TEST(SamplePh, SinglePhaseConfig) {
  mg1::SamplerConfig cfg;
  cfg.max_ph = 1;
  for (std::uint64_t s = 0; s < 50; ++s) {
    mg1::Rng rng(s);
    EXPECT_EQ(mg1::sample_ph(cfg, rng).phases(), 1);
  }
}

TEST(SamplePh, BlockDiagonalAcrossClasses) {
  mg1::SamplerConfig cfg;
  int multi_class = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    mg1::Rng rng = mg1::Rng::derive(12, {s});
    mg1::SampleStats stats;
    const auto ph = mg1::sample_ph(cfg, rng, &stats);
    const auto& g = ph.generator();
    std::vector<int> owner;
    for (std::size_t c = 0; c < stats.class_sizes.size(); ++c) owner.insert(owner.end(), stats.class_sizes[c], int(c));
    ASSERT_EQ(static_cast<int>(owner.size()), ph.phases());
    if (stats.class_sizes.size() > 1) ++multi_class;
    for (int i = 0; i < ph.phases(); ++i) {
      for (int j = 0; j < ph.phases(); ++j) {
        if (owner[i] != owner[j]) {
          EXPECT_EQ(g(i, j), 0.0);
        }
      }
    }
  }
  EXPECT_GT(multi_class, 0);
}

TEST(SamplePh, RejectionFractionIsSmall) {
  mg1::SamplerConfig cfg;
  mg1::SampleStats stats;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    mg1::Rng rng = mg1::Rng::derive(21, {s});
    (void)mg1::sample_ph(cfg, rng, &stats);
  }
  EXPECT_LT(static_cast<double>(stats.rejections) / stats.attempts, 0.20);
}

TEST(SampleInstance, UnitMeanAndLambdaRange) {
  mg1::SamplerConfig cfg;
  for (std::uint64_t s = 0; s < 300; ++s) {
    mg1::Rng rng = mg1::Rng::derive(4, {s});
    const auto inst = mg1::sample_instance(cfg, rng);
    EXPECT_NEAR(inst.service.mean(), 1.0, 1e-12);
    EXPECT_GT(inst.lambda, 0.0);
    EXPECT_LT(inst.lambda, 0.95);
  }
}

TEST(SampleInstance, RepeatableWithSeed) {
  mg1::SamplerConfig cfg;
  mg1::Rng a(77), b(77);
  const auto x = mg1::sample_instance(cfg, a);
  const auto y = mg1::sample_instance(cfg, b);
  EXPECT_EQ(x.lambda, y.lambda);
  EXPECT_EQ(x.service.generator(), y.service.generator());
  EXPECT_EQ(x.service.alpha(), y.service.alpha());
}

TEST(SamplerConfig, RejectsBadValues) {
  mg1::SamplerConfig cfg;
  cfg.max_ph = 0;
  EXPECT_THROW(cfg.check(), mg1::Error);
  cfg = {};
  cfg.rho_max = 1.0;
  EXPECT_THROW(cfg.check(), mg1::Error);
}

}  // namespace

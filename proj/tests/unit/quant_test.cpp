/* Copyright 2026 The qscope Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qscope/quant.hpp"
#include "test_util.hpp"

namespace qscope {
namespace {

TEST(Uniform, Examples) {
  UniformQuantizer q{.scale = 0.5, .zero_point = 0, .bits = 8, .is_signed = true};
  EXPECT_EQ(uniform_quantize(2.5, q), 5);
  EXPECT_EQ(uniform_quantize(1e6, q), 127);
  EXPECT_EQ(uniform_quantize(-1e6, q), -128);
  q.zero_point = 3;
  q.scale = 0.37;
  EXPECT_EQ(uniform_quantize(0.0, q), -3);
}

TEST(Uniform, RoundingModes) {
  EXPECT_EQ(round_with(2.5, RoundingMode::kHalfAwayFromZero), 3);
  EXPECT_EQ(round_with(-2.5, RoundingMode::kHalfAwayFromZero), -3);
  EXPECT_EQ(round_with(-2.5, RoundingMode::kHalfUp), -2);
  EXPECT_EQ(round_with(-2.5, RoundingMode::kFloor), -3);
  EXPECT_EQ(round_with(-2.5, RoundingMode::kCeil), -2);
}

TEST(Scale, Examples) {
  EXPECT_NEAR(compute_scale(-1, 1, 8), 2.0 / 255, 1e-15);
  EXPECT_DOUBLE_EQ(compute_scale(0, 255, 8), 1.0);
  EXPECT_QSCOPE_ERROR(compute_scale(0, 0, 8), ErrorCode::kDegenerateRange);
  EXPECT_QSCOPE_ERROR(compute_scale(0, 1, 1), ErrorCode::kInvalidBitWidth);
}

TEST(Dyadic, Examples) {
  auto f = fit_dyadic(0.75, 2);
  EXPECT_EQ(f.dyadic, (DyadicScale{3, 2}));
  EXPECT_EQ(f.error, 0.0);

  f = fit_dyadic(0.1, 4);
  EXPECT_EQ(f.dyadic, (DyadicScale{2, 4}));
  EXPECT_NEAR(f.error, 0.025, 1e-15);
  // Exhaustive search over M in [1, 16] agrees.
  std::int64_t best = 1;
  for (std::int64_t m = 1; m <= 16; ++m) {
    if (std::abs(0.1 - m / 16.0) < std::abs(0.1 - best / 16.0)) best = m;
  }
  EXPECT_EQ(best, f.dyadic.multiplier);

  f = fit_dyadic(0.0123, 30);
  EXPECT_EQ(f.dyadic, (DyadicScale{13207024, 30}));
  EXPECT_LT(f.error, std::ldexp(1.0, -31));
  for (std::int64_t m : {13207023LL, 13207025LL}) {
    EXPECT_GT(std::abs(0.0123 - std::ldexp(static_cast<double>(m), -30)), f.error);
  }
}

TEST(Dyadic, UnderflowAndJoint) {
  EXPECT_QSCOPE_ERROR(fit_dyadic(1e-12, 30), ErrorCode::kUnderflow);
  EXPECT_QSCOPE_ERROR(fit_dyadic(0.5, 0), ErrorCode::kInvariantViolation);
  auto j = fit_dyadic_joint(0.75, 8);
  EXPECT_EQ(j.dyadic, (DyadicScale{3, 2}));
  EXPECT_EQ(j.error, 0.0);
}

TEST(Thresholds, TwoBitUnitScale) {
  AccumulatorDomain acc{.bits = 8, .is_signed = true, .scale = 1.0};
  UniformQuantizer q{.scale = 1.0, .zero_point = 0, .bits = 2, .is_signed = true};
  auto t = thresholds_from_uniform(acc, q);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.levels, (std::vector<std::int64_t>{-2, -1, 0, 1}));
  EXPECT_TRUE(t.valid());
}

// Brute force: scan the accumulator range and record where the quantized
// output changes.
std::vector<std::int64_t> brute_thresholds(const AccumulatorDomain& acc,
                                           const UniformQuantizer& q) {
  std::vector<std::int64_t> out;
  const auto r = acc.range();
  const auto c = q.clip_range();
  std::int64_t prev = requantize_uniform(r.lo, acc, q);
  for (std::int64_t level = c.lo + 1; level <= prev; ++level) out.push_back(r.lo);
  for (std::int64_t v = r.lo + 1; v <= r.hi; ++v) {
    const auto y = requantize_uniform(v, acc, q);
    for (std::int64_t level = prev + 1; level <= y; ++level) out.push_back(v);
    prev = y;
  }
  for (std::int64_t level = prev + 1; level <= c.hi; ++level) out.push_back(r.hi + 1);
  return out;
}

TEST(Thresholds, ScaleTwoMatchesBruteForce) {
  AccumulatorDomain acc{.bits = 8, .is_signed = true, .scale = 1.0};
  UniformQuantizer q{.scale = 2.0, .zero_point = 0, .bits = 2, .is_signed = true,
                     .rounding = RoundingMode::kHalfUp};
  auto t = thresholds_from_uniform(acc, q);
  EXPECT_EQ(t.thresholds, (std::vector<std::int64_t>{-3, -1, 1}));
  EXPECT_EQ(t.thresholds, brute_thresholds(acc, q));
  q.rounding = RoundingMode::kHalfAwayFromZero;
  t = thresholds_from_uniform(acc, q);
  EXPECT_EQ(t.thresholds, (std::vector<std::int64_t>{-2, 0, 1}));
  EXPECT_EQ(t.thresholds, brute_thresholds(acc, q));
}

TEST(Thresholds, RandomQuantizersMatchBruteForce) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    AccumulatorDomain acc{.bits = std::uniform_int_distribution<int>(4, 10)(rng),
                          .is_signed = std::bernoulli_distribution(0.5)(rng),
                          .scale = std::uniform_real_distribution<double>(0.01, 2.0)(rng)};
    UniformQuantizer q{.scale = std::uniform_real_distribution<double>(0.05, 3.0)(rng),
                       .zero_point = std::uniform_int_distribution<int>(-3, 3)(rng),
                       .bits = std::uniform_int_distribution<int>(2, 4)(rng),
                       .is_signed = std::bernoulli_distribution(0.5)(rng),
                       .rounding = static_cast<RoundingMode>(
                           std::uniform_int_distribution<int>(0, 3)(rng))};
    const auto t = thresholds_from_uniform(acc, q);
    ASSERT_EQ(t.thresholds, brute_thresholds(acc, q)) << "case " << i;
    const auto r = acc.range();
    for (std::int64_t v = r.lo; v <= r.hi; ++v) {
      ASSERT_EQ(apply_thresholds(v, t), requantize_uniform(v, acc, q));
    }
  }
}

TEST(Thresholds, RejectsOneBitOutput) {
  AccumulatorDomain acc{.bits = 8};
  UniformQuantizer q{.bits = 1};
  EXPECT_QSCOPE_ERROR(thresholds_from_uniform(acc, q), ErrorCode::kInvalidBitWidth);
}

TEST(ApplyThresholds, HalfOpenBins) {
  ThresholdSet t{{-1, 1}, {-1, 0, 1}};
  EXPECT_EQ(apply_thresholds(0, t), 0);
  EXPECT_EQ(apply_thresholds(-1, t), 0);
  EXPECT_EQ(apply_thresholds(-2, t), -1);
  EXPECT_EQ(apply_thresholds(1, t), 1);
}

TEST(DyadicRequantize, Examples) {
  const ClipRange wide{-1000, 1000};
  EXPECT_EQ(dyadic_requantize(8, {1, 2}, 0, wide), 2);
  EXPECT_EQ(dyadic_requantize(7, {1, 2}, 0, wide), 2);
  EXPECT_EQ(dyadic_requantize(-8, {3, 3}, 0, wide), -3);
  EXPECT_EQ(dyadic_requantize(100, {1, 0}, 0, {-8, 7}), 7);
}

TEST(DyadicRequantize, MatchesExactRational) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20000; ++i) {
    const int n = std::uniform_int_distribution<int>(0, 31)(rng);
    const std::int64_t m = std::uniform_int_distribution<std::int64_t>(1, (1LL << 31) - 1)(rng);
    const std::int64_t v = std::uniform_int_distribution<std::int64_t>(-(1LL << 31), 1LL << 31)(rng);
    const std::int64_t z = std::uniform_int_distribution<int>(-5, 5)(rng);
    ASSERT_EQ(dyadic_requantize(v, {m, n}, z, {-128, 127}),
              oracle::requantize_exact(v, m, n, z, -128, 127));
  }
}

}  // namespace
}  // namespace qscope

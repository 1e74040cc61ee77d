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

#include "qscope/quant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "qscope/error.hpp"

namespace qscope {

__extension__ typedef __int128 i128;

ClipRange ClipRange::for_bits(int bits, bool is_signed) {
  if (is_signed) {
    return {-(std::int64_t{1} << (bits - 1)), (std::int64_t{1} << (bits - 1)) - 1};
  }
  return {0, (std::int64_t{1} << bits) - 1};
}

UniformQuantizer UniformQuantizer::from_range(double alpha, double beta, int bits,
                                              bool is_signed, RoundingMode rounding) {
  UniformQuantizer q;
  q.scale = compute_scale(alpha, beta, bits);
  q.bits = bits;
  q.is_signed = is_signed;
  q.rounding = rounding;
  return q;
}

std::int64_t round_with(double x, RoundingMode mode) {
  // Keep llround/floor results inside int64.
  constexpr double kLimit = 4.0e18;
  x = std::clamp(x, -kLimit, kLimit);
  switch (mode) {
    case RoundingMode::kHalfAwayFromZero: return std::llround(x);
    case RoundingMode::kHalfUp: return static_cast<std::int64_t>(std::floor(x + 0.5));
    case RoundingMode::kFloor: return static_cast<std::int64_t>(std::floor(x));
    case RoundingMode::kCeil: return static_cast<std::int64_t>(std::ceil(x));
  }
  return 0;
}

std::int64_t uniform_quantize(double r, const UniformQuantizer& q) {
  return q.clip_range().clamp(round_with(r / q.scale, q.rounding) - q.zero_point);
}

double compute_scale(double alpha, double beta, int bits) {
  if (!(beta > alpha)) {
    throw Error(ErrorCode::kDegenerateRange, "range upper bound must exceed lower bound");
  }
  if (bits < 2 || bits > 62) {
    throw Error(ErrorCode::kInvalidBitWidth, "bit-width must be in [2, 62]");
  }
  return (beta - alpha) / static_cast<double>((std::int64_t{1} << bits) - 1);
}

double DyadicScale::value() const { return std::ldexp(static_cast<double>(multiplier), -shift); }

namespace {

void check_fit_args(double scale, int max_shift) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kDegenerateRange, "scale must be positive and finite");
  }
  if (max_shift < 1 || max_shift > 52) {
    throw Error(ErrorCode::kInvariantViolation, "shift limit must be in [1, 52]");
  }
}

std::optional<DyadicFit> fit_at(double scale, int shift) {
  double target = std::ldexp(scale, shift);
  if (target < 0.5 || target >= 0x1p62) return std::nullopt;
  DyadicFit fit;
  fit.dyadic = {std::llround(target), shift};
  fit.error = std::abs(scale - fit.dyadic.value());
  return fit;
}

}  // namespace

DyadicFit fit_dyadic(double scale, int max_shift) {
  check_fit_args(scale, max_shift);
  auto fit = fit_at(scale, max_shift);
  if (!fit) {
    throw Error(ErrorCode::kUnderflow,
                "scale not representable with shift " + std::to_string(max_shift));
  }
  return *fit;
}

DyadicFit fit_dyadic_joint(double scale, int max_shift) {
  check_fit_args(scale, max_shift);
  std::optional<DyadicFit> best;
  for (int n = 1; n <= max_shift; ++n) {
    auto fit = fit_at(scale, n);
    if (fit && (!best || fit->error < best->error)) best = fit;
  }
  if (!best) {
    throw Error(ErrorCode::kUnderflow,
                "scale not representable with shift <= " + std::to_string(max_shift));
  }
  return *best;
}

bool ThresholdSet::valid() const {
  return levels.size() == thresholds.size() + 1 &&
         std::is_sorted(thresholds.begin(), thresholds.end());
}

std::int64_t requantize_uniform(std::int64_t v, const AccumulatorDomain& acc,
                                const UniformQuantizer& q_out) {
  double x = static_cast<double>(v) * acc.scale / q_out.scale;
  return q_out.clip_range().clamp(round_with(x, q_out.rounding) - q_out.zero_point);
}

ThresholdSet thresholds_from_uniform(const AccumulatorDomain& acc, const UniformQuantizer& q_out) {
  if (q_out.bits < 2) {
    throw Error(ErrorCode::kInvalidBitWidth, "threshold requantization needs >= 2 output bits");
  }
  const auto out = q_out.clip_range();
  const auto domain = acc.range();
  auto level_of = [&](std::int64_t v) { return requantize_uniform(v, acc, q_out); };

  ThresholdSet t;
  t.levels.reserve(static_cast<std::size_t>(out.hi - out.lo + 1));
  for (auto x = out.lo; x <= out.hi; ++x) t.levels.push_back(x);

  for (auto x = out.lo + 1; x <= out.hi; ++x) {
    // Smallest accumulator value whose level reaches x.
    std::int64_t lo = domain.lo;
    std::int64_t hi = domain.hi + 1;
    while (lo < hi) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (level_of(mid) >= x) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    t.thresholds.push_back(lo);
  }
  return t;
}

std::int64_t apply_thresholds(std::int64_t v, const ThresholdSet& t) {
  auto it = std::upper_bound(t.thresholds.begin(), t.thresholds.end(), v);
  return t.levels[static_cast<std::size_t>(it - t.thresholds.begin())];
}

std::int64_t dyadic_requantize(std::int64_t v, const DyadicScale& d, std::int64_t zero_point,
                               const ClipRange& clip) {
  i128 acc = static_cast<i128>(v) * d.multiplier;
  if (d.shift > 0) acc += static_cast<i128>(1) << (d.shift - 1);
  acc >>= d.shift;
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
  if (acc > kMax) acc = kMax;
  if (acc < kMin) acc = kMin;
  return clip.clamp(static_cast<std::int64_t>(acc) - zero_point);
}

}  // namespace qscope

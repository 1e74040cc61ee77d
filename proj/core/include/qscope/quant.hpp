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

// Integer quantization arithmetic: uniform affine quantization, dyadic
// scale approximation and threshold-based (non-uniform) requantization.

#ifndef QSCOPE_QUANT_HPP_
#define QSCOPE_QUANT_HPP_

#include <cstdint>
#include <vector>

namespace qscope {

enum class RoundingMode {
  kHalfAwayFromZero,  // default
  kHalfUp,            // floor(x + 1/2); what add-then-shift produces
  kFloor,
  kCeil,
};

struct ClipRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t clamp(std::int64_t v) const { return v < lo ? lo : (v > hi ? hi : v); }
  static ClipRange for_bits(int bits, bool is_signed);
};

struct UniformQuantizer {
  double scale = 1.0;
  std::int64_t zero_point = 0;
  int bits = 8;
  bool is_signed = true;
  RoundingMode rounding = RoundingMode::kHalfAwayFromZero;

  ClipRange clip_range() const { return ClipRange::for_bits(bits, is_signed); }

  // Scale derived from the representable range [alpha, beta].
  static UniformQuantizer from_range(double alpha, double beta, int bits, bool is_signed,
                                     RoundingMode rounding = RoundingMode::kHalfAwayFromZero);
};

std::int64_t round_with(double x, RoundingMode mode);

std::int64_t uniform_quantize(double r, const UniformQuantizer& q);

// (beta - alpha) / (2^B - 1). Throws kDegenerateRange when beta <= alpha.
double compute_scale(double alpha, double beta, int bits);

struct DyadicScale {
  std::int64_t multiplier = 1;  // M
  int shift = 0;                // n

  double value() const;
  bool operator==(const DyadicScale&) const = default;
};

struct DyadicFit {
  DyadicScale dyadic;
  double error = 0.0;  // |S - M / 2^n|
};

// Pins n = max_shift and takes M = round(S * 2^n). Throws kUnderflow when
// S * 2^max_shift < 1/2.
DyadicFit fit_dyadic(double scale, int max_shift);

// Searches every n in [1, max_shift] for the smallest error; ties go to the
// smaller n.
DyadicFit fit_dyadic_joint(double scale, int max_shift);

// Integer accumulator feeding a requantization step. `scale` is the real
// value of one accumulator unit.
struct AccumulatorDomain {
  int bits = 32;
  bool is_signed = true;
  double scale = 1.0;

  ClipRange range() const { return ClipRange::for_bits(bits, is_signed); }
};

// Bins [thresholds[i-1], thresholds[i]) map to levels[i]; values below the
// first threshold map to levels[0]. Thresholds are non-decreasing; equal
// neighbours denote an empty bin.
struct ThresholdSet {
  std::vector<std::int64_t> thresholds;
  std::vector<std::int64_t> levels;

  std::size_t size() const { return thresholds.size(); }
  bool valid() const;
};

// Requantization of accumulator value v through q_out:
// clip(Int(v * acc.scale / q_out.scale) - Z) with q_out's rounding mode.
std::int64_t requantize_uniform(std::int64_t v, const AccumulatorDomain& acc,
                                const UniformQuantizer& q_out);

// T = 2^bits - 1 thresholds reproducing requantize_uniform on every value in
// the accumulator range. Requires q_out.bits >= 2.
ThresholdSet thresholds_from_uniform(const AccumulatorDomain& acc, const UniformQuantizer& q_out);

std::int64_t apply_thresholds(std::int64_t v, const ThresholdSet& t);

// clip(((v * M + 2^(n-1)) >> n) - Z) with an arithmetic shift.
std::int64_t dyadic_requantize(std::int64_t v, const DyadicScale& d, std::int64_t zero_point,
                               const ClipRange& clip);

}  // namespace qscope

#endif  // QSCOPE_QUANT_HPP_

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

// Abstract scratchpad accelerator: a cluster of identical cores sharing a
// banked L1, an on-chip L2 and an unbounded off-chip L3, with the calibration
// constants of the analytical latency model. The cycle constants are not
// measured values; fit them against traces of the target.

#ifndef QSCOPE_PLATFORM_HPP_
#define QSCOPE_PLATFORM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qscope {

struct PlatformSpec {
  int num_cores = 8;
  int num_banks = 16;
  std::int64_t l1_bytes = 64 * 1024;
  std::int64_t l2_bytes = 512 * 1024;
  std::int64_t chunk_bytes = 4;
  double dma_l2_l1_bytes_per_cycle = 8.0;
  double dma_l3_l2_bytes_per_cycle = 1.0;
  std::int64_t dma_setup_cycles = 64;
  double cycles_per_mac = 1.0;
  double cycles_per_bop = 0.01;
  double parallel_serial_fraction = 0.05;
  std::int64_t lut_contention_granularity_bytes = 64;

  bool operator==(const PlatformSpec&) const = default;
};

// Throws kInvariantViolation on the first broken invariant.
void validate_platform(const PlatformSpec& spec);

// JSON with the PlatformSpec field names. num_cores, num_banks, l1_bytes and
// l2_bytes are required; byte sizes may be written as "64 kB".
PlatformSpec parse_platform(std::string_view text);
std::string serialize_platform(const PlatformSpec& spec);

enum class WorkKind { kMac, kBop, kLutAccess };

// Cores' worth of useful parallelism for one kind of work, in [1, M].
// `lut_bytes` must be given exactly for kLutAccess.
double effective_parallelism(const PlatformSpec& spec, WorkKind kind,
                             std::optional<std::int64_t> lut_bytes = std::nullopt);

struct Deadline {
  std::int64_t cycles = 1;
};

}  // namespace qscope

#endif  // QSCOPE_PLATFORM_HPP_

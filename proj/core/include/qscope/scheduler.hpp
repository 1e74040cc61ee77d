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

// Platform-aware refinement: fuses linear nodes with their trailing
// activation/quantization, splits each layer into L1-sized tiles along output
// channels (linear layers) or output features (element-wise layers), and
// bounds the latency of the resulting sequential schedule.

#ifndef QSCOPE_SCHEDULER_HPP_
#define QSCOPE_SCHEDULER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qscope/cost_model.hpp"
#include "qscope/platform.hpp"

namespace qscope {

enum class BlockCategory { kInput, kOutput, kParam, kTemp };
enum class SplitAxis { kOutChannels, kOutFeatures, kNone };

std::string_view to_string(BlockCategory c);

struct DataBlock {
  BlockCategory category = BlockCategory::kInput;
  std::int64_t bits = 0;
  SplitAxis divisible_along = SplitAxis::kNone;

  bool divisible() const { return divisible_along != SplitAxis::kNone; }
  bool operator==(const DataBlock&) const = default;
};

// The data of one layer. Divisible blocks are split in proportion to the
// `split_units` slices (output channels or output elements) a tile covers.
struct LayerBlocks {
  std::vector<DataBlock> blocks;
  SplitAxis axis = SplitAxis::kOutChannels;
  std::int64_t split_units = 1;

  std::int64_t bits(BlockCategory c) const;
  std::int64_t total_bytes() const;
};

LayerBlocks classify_blocks(const DecoratedNode& node);

// Largest per-tile slice of a divisible block when split into tiles of
// `units_per_tile` slices.
std::int64_t tile_bits(const DataBlock& block, std::int64_t units_per_tile,
                       std::int64_t split_units);

// L1 bytes needed with `num_tiles` tiles: resident blocks once, divisible
// blocks per tile (doubled when double-buffered), each rounded up to whole
// chunks.
std::int64_t l1_occupancy_bytes(const LayerBlocks& layer, std::int64_t num_tiles,
                                bool double_buffered, const PlatformSpec& spec);

struct Tiling {
  std::int64_t num_tiles = 1;
  std::int64_t units_per_tile = 1;
  std::map<BlockCategory, std::int64_t> per_tile_bits;  // largest tile
  bool double_buffered = false;
  std::int64_t l1_bytes = 0;
};

// Smallest tile count that fits L1. When double buffering is requested and
// the layer needs more than one tile, the smallest count whose
// double-buffered layout fits is used instead, if there is one. Throws
// kUntileable.
Tiling tile_layer(const LayerBlocks& layer, const PlatformSpec& spec, bool want_double_buffer);

struct LayerWork {
  std::string id;
  NodeCosts costs;
  WorkKind kind = WorkKind::kMac;
  std::optional<std::int64_t> lut_bytes;
};

struct FusedLayer {
  std::string id;  // first member
  std::vector<std::string> members;
  std::vector<LayerWork> work;
  LayerBlocks blocks;

  std::int64_t macs() const;
  std::int64_t bops() const;
};

// One layer per linear node (absorbing a directly following single-consumer
// Act and Quant, in either order) and one per remaining node, in topological
// order.
std::vector<FusedLayer> build_layers(const DecoratedGraph& dg, bool fuse = true);

// Cycle counts of one tile: inbound DMA, compute, outbound DMA.
struct TileTiming {
  std::int64_t dma_in = 0;
  std::int64_t compute = 0;
  std::int64_t dma_out = 0;

  bool operator==(const TileTiming&) const = default;
};

// Single-buffered: sum of all stages. Double-buffered: while tile i computes,
// the DMA engine loads tile i+1 and stores tile i-1:
//   in_1 + sum_i max(c_i, in_{i+1} + out_{i-1}) + out_k.
std::int64_t pipeline_cycles(std::span<const TileTiming> tiles, bool double_buffered);

struct SubOp {
  std::string parent;
  std::int64_t tile = 0;
  std::int64_t units = 0;
  std::int64_t macs = 0;
  std::int64_t bops = 0;
  std::int64_t dma_in_bits = 0;
  std::int64_t dma_out_bits = 0;
};

std::vector<SubOp> split_subops(const FusedLayer& layer, const Tiling& tiling);
std::vector<TileTiming> tile_timings(const FusedLayer& layer, const Tiling& tiling,
                                     const PlatformSpec& spec);

struct LayerLatency {
  std::string id;
  std::vector<std::string> members;
  std::int64_t compute_cycles = 0;
  std::int64_t dma_cycles = 0;
  std::int64_t l3_cycles = 0;
  std::int64_t total_cycles = 0;
  std::int64_t num_tiles = 1;
  bool double_buffered = false;
  std::int64_t l1_peak_bytes = 0;
  std::int64_t l2_peak_bytes = 0;
};

// Bytes of the layer's working set that do not fit L2 and are staged from L3.
std::int64_t l3_overflow_bytes(const FusedLayer& layer, const PlatformSpec& spec);

LayerLatency layer_latency(const FusedLayer& layer, const Tiling& tiling,
                           const PlatformSpec& spec);

struct LatencyReport {
  std::vector<LayerLatency> layers;
  std::int64_t total_cycles = 0;
  std::optional<std::int64_t> deadline_cycles;
  std::optional<std::int64_t> slack_cycles;
  std::optional<bool> feasible;
};

struct ScheduledLayer {
  FusedLayer layer;
  Tiling tiling;
  std::vector<SubOp> subops;
  std::vector<TileTiming> tiles;
};

struct Schedule {
  std::vector<ScheduledLayer> layers;
  LatencyReport report;
};

struct ScheduleOptions {
  bool double_buffer = true;
  bool fuse = true;
};

// Layers run one after another. Untileable layers raise kUntileable with the
// layer id as subject; a missed deadline is only reported.
Schedule refine_and_schedule(const DecoratedGraph& dg, const PlatformSpec& spec,
                             std::optional<Deadline> deadline = std::nullopt,
                             const ScheduleOptions& options = {});

struct Feasibility {
  bool feasible = true;
  std::int64_t slack_cycles = 0;
};

Feasibility check_feasibility(const LatencyReport& report, Deadline deadline);

std::string report_to_json(const LatencyReport& report);
std::string schedule_to_json(const Schedule& schedule);
// Columns: layer,tiles,compute_cycles,dma_cycles,total,l1_peak,l2_peak
std::string report_to_csv(const LatencyReport& report);

}  // namespace qscope

#endif  // QSCOPE_SCHEDULER_HPP_

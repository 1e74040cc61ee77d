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

#include "qscope/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "qscope/error.hpp"

namespace qscope {

__extension__ typedef __int128 i128;

std::string_view to_string(BlockCategory c) {
  switch (c) {
    case BlockCategory::kInput: return "input";
    case BlockCategory::kOutput: return "output";
    case BlockCategory::kParam: return "param";
    case BlockCategory::kTemp: return "temp";
  }
  return "?";
}

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t round_to_chunk(std::int64_t bytes, std::int64_t chunk) {
  return ceil_div(bytes, chunk) * chunk;
}

// floor(total * part / whole) without overflow.
std::int64_t scaled_floor(std::int64_t total, std::int64_t part, std::int64_t whole) {
  return static_cast<std::int64_t>(static_cast<i128>(total) * part / whole);
}

// Portion of `total` attributed to units [begin, end) of `whole`; the
// portions of a partition sum to `total` exactly.
std::int64_t share(std::int64_t total, std::int64_t begin, std::int64_t end, std::int64_t whole) {
  return scaled_floor(total, end, whole) - scaled_floor(total, begin, whole);
}

std::int64_t cycles_for(std::int64_t bytes, double bytes_per_cycle, std::int64_t setup) {
  if (bytes <= 0) return 0;
  return setup + static_cast<std::int64_t>(std::ceil(static_cast<double>(bytes) / bytes_per_cycle));
}

}  // namespace

std::int64_t LayerBlocks::bits(BlockCategory c) const {
  std::int64_t total = 0;
  for (const auto& b : blocks) {
    if (b.category == c) total += b.bits;
  }
  return total;
}

std::int64_t LayerBlocks::total_bytes() const {
  std::int64_t total = 0;
  for (const auto& b : blocks) total += bits_to_bytes(b.bits);
  return total;
}

LayerBlocks classify_blocks(const DecoratedNode& node) {
  LayerBlocks layer;
  const auto& m = node.memory;
  auto add = [&](BlockCategory c, std::int64_t bits, SplitAxis axis) {
    if (bits > 0 || c == BlockCategory::kInput || c == BlockCategory::kOutput) {
      layer.blocks.push_back({c, bits, axis});
    }
  };
  if (node.is_linear()) {
    layer.axis = SplitAxis::kOutChannels;
    layer.split_units = std::max<std::int64_t>(1, node.out_channels);
    // A depthwise output channel reads only its own input channel.
    add(BlockCategory::kInput, m.input_bits,
        node.depthwise ? SplitAxis::kOutChannels : SplitAxis::kNone);
    add(BlockCategory::kParam, m.param_bits, SplitAxis::kOutChannels);
    add(BlockCategory::kOutput, m.output_bits, SplitAxis::kOutChannels);
    add(BlockCategory::kTemp, m.temp_bits, SplitAxis::kNone);
  } else {
    layer.axis = SplitAxis::kOutFeatures;
    layer.split_units = std::max<std::int64_t>(1, node.output_elements);
    add(BlockCategory::kInput, m.input_bits, SplitAxis::kOutFeatures);
    add(BlockCategory::kParam, m.param_bits - node.structure_bits, SplitAxis::kOutFeatures);
    add(BlockCategory::kOutput, m.output_bits, SplitAxis::kOutFeatures);
    add(BlockCategory::kTemp, m.temp_bits + node.structure_bits, SplitAxis::kNone);
  }
  return layer;
}

std::int64_t tile_bits(const DataBlock& block, std::int64_t units_per_tile,
                       std::int64_t split_units) {
  if (!block.divisible() || units_per_tile >= split_units) return block.bits;
  return static_cast<std::int64_t>(
      (static_cast<i128>(block.bits) * units_per_tile + split_units - 1) / split_units);
}

std::int64_t l1_occupancy_bytes(const LayerBlocks& layer, std::int64_t num_tiles,
                                bool double_buffered, const PlatformSpec& spec) {
  const std::int64_t units_per_tile = ceil_div(layer.split_units, num_tiles);
  std::int64_t total = 0;
  for (const auto& b : layer.blocks) {
    const auto bytes =
        round_to_chunk(bits_to_bytes(tile_bits(b, units_per_tile, layer.split_units)),
                       spec.chunk_bytes);
    total += b.divisible() && double_buffered ? 2 * bytes : bytes;
  }
  return total;
}

Tiling tile_layer(const LayerBlocks& layer, const PlatformSpec& spec, bool want_double_buffer) {
  std::int64_t resident = 0;
  for (const auto& b : layer.blocks) {
    if (!b.divisible()) resident += round_to_chunk(bits_to_bytes(b.bits), spec.chunk_bytes);
  }
  if (resident > spec.l1_bytes) {
    throw Error(ErrorCode::kUntileable,
                "resident data needs " + std::to_string(resident) + " bytes of L1, only " +
                    std::to_string(spec.l1_bytes) + " available");
  }
  // Smallest k in [from, units] whose layout fits; occupancy never grows
  // with k.
  auto min_tiles = [&](bool db, std::int64_t from) -> std::optional<std::int64_t> {
    std::int64_t lo = from, hi = layer.split_units;
    if (lo > hi || l1_occupancy_bytes(layer, hi, db, spec) > spec.l1_bytes) return std::nullopt;
    while (lo < hi) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (l1_occupancy_bytes(layer, mid, db, spec) <= spec.l1_bytes) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  };
  const auto single = min_tiles(false, 1);
  if (!single) {
    throw Error(ErrorCode::kUntileable,
                "even " + std::to_string(layer.split_units) + " tiles do not fit " +
                    std::to_string(spec.l1_bytes) + " bytes of L1");
  }
  std::int64_t k = *single;
  bool db = false;
  // A single tile has nothing to overlap.
  if (want_double_buffer && k > 1) {
    if (auto k_db = min_tiles(true, 2)) {
      k = *k_db;
      db = true;
    }
  }

  Tiling t;
  t.units_per_tile = ceil_div(layer.split_units, k);
  t.num_tiles = ceil_div(layer.split_units, t.units_per_tile);
  t.double_buffered = db;
  t.l1_bytes = l1_occupancy_bytes(layer, t.num_tiles, t.double_buffered, spec);
  for (const auto& b : layer.blocks) {
    t.per_tile_bits[b.category] += tile_bits(b, t.units_per_tile, layer.split_units);
  }
  return t;
}

std::int64_t FusedLayer::macs() const {
  std::int64_t total = 0;
  for (const auto& w : work) total += w.costs.macs;
  return total;
}

std::int64_t FusedLayer::bops() const {
  std::int64_t total = 0;
  for (const auto& w : work) total += w.costs.bops;
  return total;
}

namespace {

LayerWork work_of(const DecoratedNode& n) {
  LayerWork w;
  w.id = n.id;
  w.costs = n.costs;
  const bool lut = n.choice.implementation == Implementation::kLut;
  if (lut && n.is_linear()) {
    w.kind = WorkKind::kLutAccess;
    w.lut_bytes = n.memory.temp_bytes();
  } else if (lut) {
    w.kind = WorkKind::kLutAccess;
    w.lut_bytes = bits_to_bytes(n.structure_bits);
  } else {
    w.kind = n.costs.macs > 0 ? WorkKind::kMac : WorkKind::kBop;
  }
  return w;
}

}  // namespace

std::vector<FusedLayer> build_layers(const DecoratedGraph& dg, bool fuse) {
  const Graph& g = dg.base;
  std::map<std::string, bool> absorbed;
  std::vector<FusedLayer> layers;

  for (const auto& node : dg.nodes) {
    if (absorbed[node.id]) continue;
    FusedLayer layer;
    layer.id = node.id;
    layer.members.push_back(node.id);
    layer.work.push_back(work_of(node));
    layer.blocks = classify_blocks(node);
    if (!fuse || !node.is_linear()) {
      layers.push_back(std::move(layer));
      continue;
    }

    bool has_act = false, has_quant = false;
    std::string cursor = node.id;
    const DecoratedNode* tail = &node;
    for (;;) {
      auto outs = g.out_edges(cursor);
      if (outs.size() != 1) break;
      const auto& next_id = g.edges[outs.front()].dst;
      const DecoratedNode* next = dg.find(next_id);
      if (!next || g.in_edges(next_id).size() != 1) break;
      if (next->kind == NodeKind::kAct && !has_act) {
        has_act = true;
      } else if (next->kind == NodeKind::kQuant && !has_quant) {
        has_quant = true;
      } else {
        break;
      }
      absorbed[next_id] = true;
      layer.members.push_back(next_id);
      layer.work.push_back(work_of(*next));
      // Trailing nodes contribute their own parameters and resident
      // structures; the intermediate tensors never leave L1.
      for (auto& b : layer.blocks.blocks) {
        if (b.category == BlockCategory::kParam) b.bits += next->memory.param_bits - next->structure_bits;
      }
      const auto extra_temp = next->memory.temp_bits + next->structure_bits;
      const auto extra_param = next->memory.param_bits - next->structure_bits;
      auto& blocks = layer.blocks.blocks;
      if (extra_param > 0 &&
          std::none_of(blocks.begin(), blocks.end(),
                       [](const DataBlock& b) { return b.category == BlockCategory::kParam; })) {
        blocks.push_back({BlockCategory::kParam, extra_param, SplitAxis::kOutChannels});
      }
      if (extra_temp > 0) {
        auto it = std::find_if(blocks.begin(), blocks.end(),
                               [](const DataBlock& b) { return b.category == BlockCategory::kTemp; });
        if (it == blocks.end()) {
          blocks.push_back({BlockCategory::kTemp, extra_temp, SplitAxis::kNone});
        } else {
          it->bits += extra_temp;
        }
      }
      tail = next;
      cursor = next_id;
    }
    for (auto& b : layer.blocks.blocks) {
      if (b.category == BlockCategory::kOutput) b.bits = tail->memory.output_bits;
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

std::int64_t pipeline_cycles(std::span<const TileTiming> tiles, bool double_buffered) {
  std::int64_t total = 0;
  if (!double_buffered) {
    for (const auto& t : tiles) total += t.dma_in + t.compute + t.dma_out;
    return total;
  }
  const std::size_t k = tiles.size();
  if (k == 0) return 0;
  total = tiles.front().dma_in;
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t transfer = 0;
    if (i + 1 < k) transfer += tiles[i + 1].dma_in;
    if (i > 0) transfer += tiles[i - 1].dma_out;
    total += std::max(tiles[i].compute, transfer);
  }
  return total + tiles.back().dma_out;
}

std::vector<SubOp> split_subops(const FusedLayer& layer, const Tiling& tiling) {
  const auto units = layer.blocks.split_units;
  std::vector<SubOp> ops;
  ops.reserve(static_cast<std::size_t>(tiling.num_tiles));
  for (std::int64_t t = 0; t < tiling.num_tiles; ++t) {
    const std::int64_t begin = t * tiling.units_per_tile;
    const std::int64_t end = std::min(units, begin + tiling.units_per_tile);
    const bool first = t == 0;
    const bool last = t + 1 == tiling.num_tiles;
    SubOp op;
    op.parent = layer.id;
    op.tile = t;
    op.units = end - begin;
    for (const auto& w : layer.work) {
      op.macs += share(w.costs.macs, begin, end, units);
      op.bops += share(w.costs.bops, begin, end, units);
    }
    for (const auto& b : layer.blocks.blocks) {
      std::int64_t moved = 0;
      if (b.divisible()) {
        moved = share(b.bits, begin, end, units);
      } else if (b.category == BlockCategory::kOutput ? last : first) {
        moved = b.bits;
      }
      if (b.category == BlockCategory::kOutput) {
        op.dma_out_bits += moved;
      } else {
        op.dma_in_bits += moved;
      }
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

std::int64_t l3_overflow_bytes(const FusedLayer& layer, const PlatformSpec& spec) {
  return std::max<std::int64_t>(0, layer.blocks.total_bytes() - spec.l2_bytes);
}

std::vector<TileTiming> tile_timings(const FusedLayer& layer, const Tiling& tiling,
                                     const PlatformSpec& spec) {
  const auto units = layer.blocks.split_units;
  const auto ops = split_subops(layer, tiling);
  const auto overflow = l3_overflow_bytes(layer, spec);
  const std::int64_t l3_total =
      overflow > 0 ? static_cast<std::int64_t>(
                         std::ceil(static_cast<double>(overflow) / spec.dma_l3_l2_bytes_per_cycle))
                   : 0;

  std::vector<double> parallelism;
  for (const auto& w : layer.work) parallelism.push_back(effective_parallelism(spec, w.kind, w.lut_bytes));

  std::vector<TileTiming> tiles;
  tiles.reserve(ops.size());
  const auto n = static_cast<std::int64_t>(ops.size());
  for (std::int64_t t = 0; t < n; ++t) {
    const auto& op = ops[static_cast<std::size_t>(t)];
    const std::int64_t begin = t * tiling.units_per_tile;
    const std::int64_t end = begin + op.units;
    double work = 0.0;
    for (std::size_t m = 0; m < layer.work.size(); ++m) {
      const auto& c = layer.work[m].costs;
      const double macs = static_cast<double>(share(c.macs, begin, end, units));
      const double bops = static_cast<double>(share(c.bops, begin, end, units));
      work += (macs * spec.cycles_per_mac + bops * spec.cycles_per_bop) / parallelism[m];
    }
    TileTiming timing;
    timing.compute = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(work - 1e-9)));
    timing.dma_in = cycles_for(bits_to_bytes(op.dma_in_bits), spec.dma_l2_l1_bytes_per_cycle,
                               spec.dma_setup_cycles) +
                    share(l3_total, t, t + 1, n);
    timing.dma_out = cycles_for(bits_to_bytes(op.dma_out_bits), spec.dma_l2_l1_bytes_per_cycle,
                                spec.dma_setup_cycles);
    tiles.push_back(timing);
  }
  return tiles;
}

LayerLatency layer_latency(const FusedLayer& layer, const Tiling& tiling,
                           const PlatformSpec& spec) {
  const auto tiles = tile_timings(layer, tiling, spec);
  LayerLatency lat;
  lat.id = layer.id;
  lat.members = layer.members;
  for (const auto& t : tiles) {
    lat.compute_cycles += t.compute;
    lat.dma_cycles += t.dma_in + t.dma_out;
  }
  const auto overflow = l3_overflow_bytes(layer, spec);
  lat.l3_cycles = overflow > 0 ? static_cast<std::int64_t>(std::ceil(
                                     static_cast<double>(overflow) / spec.dma_l3_l2_bytes_per_cycle))
                               : 0;
  lat.total_cycles = pipeline_cycles(tiles, tiling.double_buffered);
  lat.num_tiles = tiling.num_tiles;
  lat.double_buffered = tiling.double_buffered;
  lat.l1_peak_bytes = tiling.l1_bytes;
  lat.l2_peak_bytes = std::min(layer.blocks.total_bytes(), spec.l2_bytes);
  return lat;
}

Schedule refine_and_schedule(const DecoratedGraph& dg, const PlatformSpec& spec,
                             std::optional<Deadline> deadline, const ScheduleOptions& options) {
  validate_platform(spec);
  Schedule schedule;
  for (auto& layer : build_layers(dg, options.fuse)) {
    ScheduledLayer sl;
    try {
      sl.tiling = tile_layer(layer.blocks, spec, options.double_buffer);
    } catch (const Error& e) {
      throw Error(e.code(), e.message(), layer.id);
    }
    sl.subops = split_subops(layer, sl.tiling);
    sl.tiles = tile_timings(layer, sl.tiling, spec);
    auto lat = layer_latency(layer, sl.tiling, spec);
    schedule.report.total_cycles += lat.total_cycles;
    schedule.report.layers.push_back(std::move(lat));
    sl.layer = std::move(layer);
    schedule.layers.push_back(std::move(sl));
  }
  if (deadline) {
    auto f = check_feasibility(schedule.report, *deadline);
    schedule.report.deadline_cycles = deadline->cycles;
    schedule.report.slack_cycles = f.slack_cycles;
    schedule.report.feasible = f.feasible;
  }
  return schedule;
}

Feasibility check_feasibility(const LatencyReport& report, Deadline deadline) {
  return {report.total_cycles <= deadline.cycles, deadline.cycles - report.total_cycles};
}

namespace {

nlohmann::json report_json(const LatencyReport& report) {
  using nlohmann::json;
  json layers = json::array();
  for (const auto& l : report.layers) {
    layers.push_back({{"id", l.id},
                      {"members", l.members},
                      {"num_tiles", l.num_tiles},
                      {"double_buffered", l.double_buffered},
                      {"compute_cycles", l.compute_cycles},
                      {"dma_cycles", l.dma_cycles},
                      {"l3_cycles", l.l3_cycles},
                      {"total_cycles", l.total_cycles},
                      {"l1_peak_bytes", l.l1_peak_bytes},
                      {"l2_peak_bytes", l.l2_peak_bytes}});
  }
  json root = json::object();
  root["format_version"] = 1;
  root["total_cycles"] = report.total_cycles;
  if (report.deadline_cycles) {
    root["deadline_cycles"] = *report.deadline_cycles;
    root["slack_cycles"] = *report.slack_cycles;
    root["feasible"] = *report.feasible;
  }
  root["layers"] = std::move(layers);
  return root;
}

}  // namespace

std::string report_to_json(const LatencyReport& report) { return report_json(report).dump(2) + "\n"; }

std::string schedule_to_json(const Schedule& schedule) {
  using nlohmann::json;
  json root = report_json(schedule.report);
  json layers = json::array();
  for (const auto& sl : schedule.layers) {
    json tiles = json::array();
    for (std::size_t i = 0; i < sl.subops.size(); ++i) {
      const auto& op = sl.subops[i];
      const auto& t = sl.tiles[i];
      tiles.push_back({{"tile", op.tile},
                       {"units", op.units},
                       {"macs", op.macs},
                       {"bops", op.bops},
                       {"dma_in_bits", op.dma_in_bits},
                       {"dma_out_bits", op.dma_out_bits},
                       {"dma_in_cycles", t.dma_in},
                       {"compute_cycles", t.compute},
                       {"dma_out_cycles", t.dma_out}});
    }
    json blocks = json::array();
    for (const auto& b : sl.layer.blocks.blocks) {
      blocks.push_back({{"category", std::string(to_string(b.category))},
                        {"bits", b.bits},
                        {"divisible", b.divisible()}});
    }
    layers.push_back({{"id", sl.layer.id},
                      {"blocks", std::move(blocks)},
                      {"split_units", sl.layer.blocks.split_units},
                      {"units_per_tile", sl.tiling.units_per_tile},
                      {"tiles", std::move(tiles)}});
  }
  root["schedule"] = std::move(layers);
  return root.dump(2) + "\n";
}

std::string report_to_csv(const LatencyReport& report) {
  std::ostringstream out;
  out << "layer,tiles,compute_cycles,dma_cycles,total,l1_peak,l2_peak\n";
  for (const auto& l : report.layers) {
    out << l.id << ',' << l.num_tiles << ',' << l.compute_cycles << ',' << l.dma_cycles << ','
        << l.total_cycles << ',' << l.l1_peak_bytes << ',' << l.l2_peak_bytes << '\n';
  }
  return out.str();
}

}  // namespace qscope

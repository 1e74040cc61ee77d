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

// Implementation-aware cost model. Every node gets MAC and BOP counts and
// every node's data a memory footprint in bits, depending on how the node is
// implemented (im2col, LUT, thresholds, dyadic scaling, comparators).
//
// All arithmetic is exact over 64-bit integers.

#ifndef QSCOPE_COST_MODEL_HPP_
#define QSCOPE_COST_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qscope/graph.hpp"
#include "qscope/impl_config.hpp"

namespace qscope {

struct NodeCosts {
  std::int64_t macs = 0;
  std::int64_t macs_per_pixel = 0;  // C_out * C_in * k_h * k_w, no spatial factor
  std::int64_t bops = 0;

  bool operator==(const NodeCosts&) const = default;
};

inline std::int64_t bits_to_bytes(std::int64_t bits) { return (bits + 7) / 8; }

struct MemoryFootprint {
  std::int64_t input_bits = 0;
  std::int64_t param_bits = 0;
  std::int64_t output_bits = 0;
  std::int64_t temp_bits = 0;

  std::int64_t input_bytes() const { return bits_to_bytes(input_bits); }
  std::int64_t param_bytes() const { return bits_to_bytes(param_bits); }
  std::int64_t output_bytes() const { return bits_to_bytes(output_bits); }
  std::int64_t temp_bytes() const { return bits_to_bytes(temp_bits); }

  bool operator==(const MemoryFootprint&) const = default;
};

struct CostOptions {
  // Largest table index width (L_w + L_x for multiply LUTs, L_acc for
  // quantization LUTs).
  int lut_exponent_cap = 16;
  // Width of one quantization-LUT read in BOPs; defaults to L_acc.
  std::optional<int> lut_quant_access_bits;
  int dyadic_scale_bits = 32;
};

struct CostResult {
  NodeCosts costs;
  MemoryFootprint memory;
};

// Weight and bias terms of the im2col parameter memory.
std::int64_t conv_weight_bits(const ConvAttrs& attrs, int weight_bits);
std::int64_t conv_bias_bits(const ConvAttrs& attrs, int acc_bits);

CostResult conv_costs(const ConvAttrs& attrs, int input_bits, int weight_bits, int acc_bits,
                      Implementation impl, const CostOptions& opts = {});

// Fully-connected layer: conv_costs with a 1x1 kernel at a single position.
CostResult gemm_costs(std::int64_t in_features, std::int64_t out_features, int input_bits,
                      int weight_bits, int acc_bits, Implementation impl,
                      const CostOptions& opts = {});

// Bits needed by the resident requantization structure (threshold tree or
// table). Zero for dyadic scaling.
std::int64_t quant_structure_bits(std::int64_t channels, int acc_bits, int out_bits,
                                  const ImplChoice& choice);

CostResult quant_costs(std::int64_t num_inputs, std::int64_t channels, int acc_bits, int out_bits,
                       const ImplChoice& choice, const CostOptions& opts = {});

NodeCosts act_costs(std::int64_t num_inputs, int input_bits);

// `num_windows` is the number of pooling windows (output elements).
NodeCosts pool_costs(std::int64_t num_windows, int input_bits, std::int64_t k_w, std::int64_t k_h);

// Bit-widths resolved for one node.
struct ResolvedWidths {
  int input = 0;        // L_x (or L_acc for Quant)
  int weight = 0;       // L_w, 0 when the node has no weights
  int accumulator = 0;  // L_acc, 0 when not applicable
  int output = 0;       // L_y / width of the produced tensor
};

struct DecoratedNode {
  std::string id;
  NodeKind kind = NodeKind::kAct;
  NodeKind lowered_kind = NodeKind::kAct;  // Conv via im2col becomes MatMul
  ImplChoice choice;
  ResolvedWidths widths;
  std::int64_t input_elements = 0;
  std::int64_t output_elements = 0;
  std::int64_t out_channels = 0;  // C_out for linear nodes, tensor channels otherwise
  bool depthwise = false;
  // Part of memory.param_bits held by a resident structure (thresholds or a
  // quantization table).
  std::int64_t structure_bits = 0;
  NodeCosts costs;
  MemoryFootprint memory;

  bool is_linear() const {
    return kind == NodeKind::kConv || kind == NodeKind::kGemm || kind == NodeKind::kMatMul;
  }
  bool operator==(const DecoratedNode&) const = default;
};

struct DecoratedGraph {
  Graph base;
  std::vector<DecoratedNode> nodes;  // topological order
  std::vector<int> edge_bits;        // effective element width per edge

  const DecoratedNode* find(std::string_view id) const;
};

// Per-node costs in topological order. Widths propagate along edges: a Quant
// node emits its configured output width, Act and MaxPool pass their input
// width through, linear nodes emit the declared accumulator width.
DecoratedGraph decorate(const Graph& g, const BoundConfig& bound, const CostOptions& opts = {});

std::string decorated_to_json(const DecoratedGraph& dg);
std::string decorated_to_csv(const DecoratedGraph& dg);

}  // namespace qscope

#endif  // QSCOPE_COST_MODEL_HPP_

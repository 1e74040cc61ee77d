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

#ifndef QSCOPE_IMPL_CONFIG_HPP_
#define QSCOPE_IMPL_CONFIG_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "qscope/graph.hpp"

namespace qscope {

enum class Implementation { kIm2col, kLut, kThresholds, kDyadic, kComparator, kGemm };

std::string_view to_string(Implementation impl);
// Case-insensitive ("LUT" and "lut" are the same choice).
std::optional<Implementation> parse_implementation(std::string_view name);

// How one node is implemented. `bit_width` is the weight width L_w on
// Conv/Gemm/MatMul and the output width L_y on Quant; when absent the width
// is taken from the graph edges.
struct ImplChoice {
  Implementation implementation = Implementation::kIm2col;
  std::optional<int> bit_width;
  bool filter_wise = false;
  int num_shifts = 1;

  bool operator==(const ImplChoice&) const = default;
};

bool is_legal(NodeKind kind, Implementation impl);

struct ImplConfig {
  std::map<std::string, ImplChoice> bindings;
  std::map<NodeKind, ImplChoice> defaults;

  bool operator==(const ImplConfig&) const = default;
};

// Accepts the YAML layout of an implementation file (node id -> fields) or
// the equivalent JSON. The reserved top-level key `defaults` maps node kinds
// to fallback choices. A line holding only "..." is treated as an elision.
ImplConfig parse_impl_config(std::string_view text, const BitWidthPolicy& policy = {});

using BoundConfig = std::map<std::string, ImplChoice>;

// Resolves a choice for every node: explicit binding, then per-kind default,
// then the implicit comparator for Act and MaxPool.
BoundConfig bind_config(const Graph& g, const ImplConfig& c);

}  // namespace qscope

#endif  // QSCOPE_IMPL_CONFIG_HPP_

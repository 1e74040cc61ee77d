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

// QNN compute-graph model: typed operation nodes connected by
// tensor-carrying edges, plus the native JSON serialization.
//
// Graph inputs and outputs are modeled as edges whose `src` (resp. `dst`) is
// the boundary marker "@input" (resp. "@output"). Feature maps use HWC layout.

#ifndef QSCOPE_GRAPH_HPP_
#define QSCOPE_GRAPH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qscope {

inline constexpr std::string_view kGraphInput = "@input";
inline constexpr std::string_view kGraphOutput = "@output";
inline constexpr int kGraphFormatVersion = 1;

// Bit-widths accepted for tensor elements and implementation choices.
struct BitWidthPolicy {
  std::vector<int> allowed{2, 4, 8, 16, 32};

  bool allows(int bits) const;
};

struct TensorSpec {
  std::vector<std::int64_t> dims;
  int bit_width = 8;

  std::int64_t num_elements() const;
  std::int64_t num_bits() const { return num_elements() * bit_width; }

  bool operator==(const TensorSpec&) const = default;
};

enum class NodeKind { kQuant, kConv, kGemm, kMatMul, kAct, kMaxPool };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view name);

// Conv/Gemm/MatMul geometry. Gemm and MatMul default the spatial fields to 1.
struct ConvAttrs {
  std::int64_t c_in = 1;
  std::int64_t c_out = 1;
  std::int64_t k_h = 1;
  std::int64_t k_w = 1;
  std::int64_t h_in = 1;
  std::int64_t w_in = 1;
  std::int64_t h_out = 1;
  std::int64_t w_out = 1;
  std::int64_t stride = 1;
  std::int64_t padding = 0;
  bool depthwise = false;

  std::int64_t expected_h_out() const;
  std::int64_t expected_w_out() const;

  bool operator==(const ConvAttrs&) const = default;
};

struct PoolAttrs {
  std::int64_t k_h = 1;
  std::int64_t k_w = 1;
  std::int64_t stride = 1;

  bool operator==(const PoolAttrs&) const = default;
};

// Quantization parameters are described by size only; `channels` is the
// number of per-channel scale sets and defaults to the input channel count.
struct QuantAttrs {
  std::optional<std::int64_t> channels;

  bool operator==(const QuantAttrs&) const = default;
};

using NodeAttrs = std::variant<std::monostate, ConvAttrs, PoolAttrs, QuantAttrs>;

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kAct;
  NodeAttrs attrs;

  const ConvAttrs* conv() const { return std::get_if<ConvAttrs>(&attrs); }
  const PoolAttrs* pool() const { return std::get_if<PoolAttrs>(&attrs); }
  const QuantAttrs* quant() const { return std::get_if<QuantAttrs>(&attrs); }

  bool operator==(const Node&) const = default;
};

struct Edge {
  std::string src;
  std::string dst;
  TensorSpec tensor;

  bool from_graph_input() const { return src == kGraphInput; }
  bool to_graph_output() const { return dst == kGraphOutput; }

  bool operator==(const Edge&) const = default;
};

// `inputs` and `outputs` index into `edges`, in declaration order.
struct Graph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;

  const Node* find_node(std::string_view id) const;
  // Indices of edges entering / leaving node `id`, in edge order.
  std::vector<std::size_t> in_edges(std::string_view id) const;
  std::vector<std::size_t> out_edges(std::string_view id) const;

  bool operator==(const Graph&) const = default;
};

enum class DiagnosticKind {
  kSchema,
  kDuplicateId,
  kUnresolvedEdge,
  kCycle,
  kShape,
  kBitWidth,
  kBoundary,
  kUnreachable,
  kDeadEnd,
};

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::string subject;  // node id, or "edge[i]"
  std::string message;
};

// Structural decode of the native JSON format. Rejects malformed documents
// (kSyntax) and schema violations (kSchema) but does not check graph
// invariants.
Graph decode_graph(std::string_view text);

// decode_graph followed by validate_graph; the first diagnostic is raised as
// an Error (cycles before shape problems before everything else).
Graph parse_graph(std::string_view text, const BitWidthPolicy& policy = {});

std::string serialize_graph(const Graph& g);

// Every invariant violation, or an empty list.
std::vector<Diagnostic> validate_graph(const Graph& g,
                                       const BitWidthPolicy& policy = {});

// Kahn's algorithm; ties go to the lexicographically smallest id. Edges that
// do not resolve to nodes are ignored. Nodes on a cycle are omitted.
std::vector<std::string> topological_order(const Graph& g);

}  // namespace qscope

#endif  // QSCOPE_GRAPH_HPP_

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

#include "qscope/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "qscope/error.hpp"

namespace qscope {

using nlohmann::json;

bool BitWidthPolicy::allows(int bits) const {
  return std::find(allowed.begin(), allowed.end(), bits) != allowed.end();
}

std::int64_t TensorSpec::num_elements() const {
  std::int64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kQuant: return "Quant";
    case NodeKind::kConv: return "Conv";
    case NodeKind::kGemm: return "Gemm";
    case NodeKind::kMatMul: return "MatMul";
    case NodeKind::kAct: return "Act";
    case NodeKind::kMaxPool: return "MaxPool";
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view name) {
  for (auto k : {NodeKind::kQuant, NodeKind::kConv, NodeKind::kGemm,
                 NodeKind::kMatMul, NodeKind::kAct, NodeKind::kMaxPool}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::int64_t ConvAttrs::expected_h_out() const {
  if (stride <= 0) return -1;
  return (h_in + 2 * padding - k_h) / stride + 1;
}

std::int64_t ConvAttrs::expected_w_out() const {
  if (stride <= 0) return -1;
  return (w_in + 2 * padding - k_w) / stride + 1;
}

const Node* Graph::find_node(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

std::vector<std::size_t> Graph::in_edges(std::string_view id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].dst == id) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Graph::out_edges(std::string_view id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].src == id) out.push_back(i);
  }
  return out;
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kSchema: return "SchemaError";
    case DiagnosticKind::kDuplicateId: return "DuplicateId";
    case DiagnosticKind::kUnresolvedEdge: return "UnresolvedEdge";
    case DiagnosticKind::kCycle: return "CycleError";
    case DiagnosticKind::kShape: return "ShapeError";
    case DiagnosticKind::kBitWidth: return "InvalidBitWidth";
    case DiagnosticKind::kBoundary: return "BoundaryError";
    case DiagnosticKind::kUnreachable: return "Unreachable";
    case DiagnosticKind::kDeadEnd: return "DeadEnd";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Decoding

namespace {

[[noreturn]] void schema_error(const std::string& msg,
                               const std::string& subject = {}) {
  throw Error(ErrorCode::kSchema, msg, subject);
}

void reject_unknown_keys(const json& obj,
                         std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      schema_error("unknown key '" + key + "' in " + where, where);
    }
  }
}

const json& require(const json& obj, const std::string& key,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error("missing field '" + key + "'", where);
  return *it;
}

std::int64_t as_int(const json& v, const std::string& key,
                    const std::string& where) {
  if (!v.is_number_integer()) {
    schema_error("field '" + key + "' must be an integer", where);
  }
  return v.get<std::int64_t>();
}

std::int64_t int_field(const json& obj, const std::string& key,
                       const std::string& where) {
  return as_int(require(obj, key, where), key, where);
}

std::int64_t int_field_or(const json& obj, const std::string& key,
                          std::int64_t fallback, const std::string& where) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_int(*it, key, where);
}

std::string string_field(const json& obj, const std::string& key,
                         const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) schema_error("field '" + key + "' must be a string", where);
  return v.get<std::string>();
}

ConvAttrs decode_conv(const json& a, NodeKind kind, const std::string& where) {
  reject_unknown_keys(a,
                      {"c_in", "c_out", "k_h", "k_w", "h_in", "w_in", "h_out",
                       "w_out", "stride", "padding", "depthwise"},
                      where);
  ConvAttrs c;
  c.c_in = int_field(a, "c_in", where);
  c.c_out = int_field(a, "c_out", where);
  if (kind == NodeKind::kConv) {
    c.k_h = int_field(a, "k_h", where);
    c.k_w = int_field(a, "k_w", where);
    c.h_in = int_field(a, "h_in", where);
    c.w_in = int_field(a, "w_in", where);
    c.h_out = int_field(a, "h_out", where);
    c.w_out = int_field(a, "w_out", where);
  } else {
    c.k_h = int_field_or(a, "k_h", 1, where);
    c.k_w = int_field_or(a, "k_w", 1, where);
    c.h_in = int_field_or(a, "h_in", 1, where);
    c.w_in = int_field_or(a, "w_in", 1, where);
    c.h_out = int_field_or(a, "h_out", 1, where);
    c.w_out = int_field_or(a, "w_out", 1, where);
  }
  c.stride = int_field_or(a, "stride", 1, where);
  c.padding = int_field_or(a, "padding", 0, where);
  if (auto it = a.find("depthwise"); it != a.end()) {
    if (!it->is_boolean()) schema_error("field 'depthwise' must be a boolean", where);
    c.depthwise = it->get<bool>();
  }
  return c;
}

Node decode_node(const json& j, std::size_t index) {
  std::string where = "nodes[" + std::to_string(index) + "]";
  if (!j.is_object()) schema_error("node must be an object", where);
  reject_unknown_keys(j, {"id", "kind", "attrs"}, where);
  Node n;
  n.id = string_field(j, "id", where);
  where = n.id;
  auto kind_name = string_field(j, "kind", where);
  auto kind = parse_node_kind(kind_name);
  if (!kind) schema_error("unknown node kind '" + kind_name + "'", where);
  n.kind = *kind;

  const json empty = json::object();
  auto it = j.find("attrs");
  const json& a = it == j.end() ? empty : *it;
  if (!a.is_object()) schema_error("attrs must be an object", where);

  switch (n.kind) {
    case NodeKind::kConv:
    case NodeKind::kGemm:
    case NodeKind::kMatMul:
      if (it == j.end()) schema_error("missing field 'attrs'", where);
      n.attrs = decode_conv(a, n.kind, where);
      break;
    case NodeKind::kMaxPool: {
      if (it == j.end()) schema_error("missing field 'attrs'", where);
      reject_unknown_keys(a, {"k_h", "k_w", "stride"}, where);
      PoolAttrs p;
      p.k_h = int_field(a, "k_h", where);
      p.k_w = int_field(a, "k_w", where);
      p.stride = int_field_or(a, "stride", p.k_h, where);
      n.attrs = p;
      break;
    }
    case NodeKind::kQuant: {
      reject_unknown_keys(a, {"channels"}, where);
      QuantAttrs q;
      if (a.contains("channels")) q.channels = int_field(a, "channels", where);
      n.attrs = q;
      break;
    }
    case NodeKind::kAct:
      if (!a.empty()) schema_error("Act nodes take no attrs", where);
      break;
  }
  return n;
}

Edge decode_edge(const json& j, std::size_t index) {
  std::string where = "edge[" + std::to_string(index) + "]";
  if (!j.is_object()) schema_error("edge must be an object", where);
  reject_unknown_keys(j, {"src", "dst", "dims", "bit_width"}, where);
  Edge e;
  e.src = string_field(j, "src", where);
  e.dst = string_field(j, "dst", where);
  const auto& dims = require(j, "dims", where);
  if (!dims.is_array()) schema_error("field 'dims' must be an array", where);
  for (const auto& d : dims) e.tensor.dims.push_back(as_int(d, "dims", where));
  e.tensor.bit_width = static_cast<int>(int_field(j, "bit_width", where));
  return e;
}

std::vector<std::size_t> decode_index_list(const json& root,
                                           const std::string& key) {
  const auto& list = require(root, key, "graph");
  if (!list.is_array()) schema_error("field '" + key + "' must be an array", "graph");
  std::vector<std::size_t> out;
  for (const auto& v : list) {
    auto i = as_int(v, key, "graph");
    if (i < 0) schema_error("negative edge index in '" + key + "'", "graph");
    out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace

Graph decode_graph(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSyntax, e.what());
  }
  if (!root.is_object()) schema_error("graph document must be an object", "graph");
  reject_unknown_keys(root, {"format_version", "nodes", "edges", "inputs", "outputs"},
                      "graph");
  auto version = int_field(root, "format_version", "graph");
  if (version != kGraphFormatVersion) {
    schema_error("unsupported format_version " + std::to_string(version), "graph");
  }

  Graph g;
  const auto& nodes = require(root, "nodes", "graph");
  if (!nodes.is_array()) schema_error("field 'nodes' must be an array", "graph");
  for (std::size_t i = 0; i < nodes.size(); ++i) g.nodes.push_back(decode_node(nodes[i], i));

  const auto& edges = require(root, "edges", "graph");
  if (!edges.is_array()) schema_error("field 'edges' must be an array", "graph");
  for (std::size_t i = 0; i < edges.size(); ++i) g.edges.push_back(decode_edge(edges[i], i));

  g.inputs = decode_index_list(root, "inputs");
  g.outputs = decode_index_list(root, "outputs");
  return g;
}

Graph parse_graph(std::string_view text, const BitWidthPolicy& policy) {
  Graph g = decode_graph(text);
  auto diags = validate_graph(g, policy);
  if (diags.empty()) return g;

  auto rank = [](DiagnosticKind k) {
    switch (k) {
      case DiagnosticKind::kCycle: return 0;
      case DiagnosticKind::kShape: return 1;
      default: return 2;
    }
  };
  const auto& first = *std::min_element(
      diags.begin(), diags.end(),
      [&](const auto& a, const auto& b) { return rank(a.kind) < rank(b.kind); });
  ErrorCode code = ErrorCode::kSchema;
  switch (first.kind) {
    case DiagnosticKind::kCycle: code = ErrorCode::kCycle; break;
    case DiagnosticKind::kShape: code = ErrorCode::kShape; break;
    case DiagnosticKind::kBitWidth: code = ErrorCode::kInvalidBitWidth; break;
    case DiagnosticKind::kUnresolvedEdge: code = ErrorCode::kUnresolvedEdge; break;
    default: break;
  }
  throw Error(code, first.message, first.subject);
}

// ---------------------------------------------------------------------------
// Encoding

std::string serialize_graph(const Graph& g) {
  json root = json::object();
  root["format_version"] = kGraphFormatVersion;
  json nodes = json::array();
  for (const auto& n : g.nodes) {
    json jn = json::object();
    jn["id"] = n.id;
    jn["kind"] = std::string(to_string(n.kind));
    if (const auto* c = n.conv()) {
      jn["attrs"] = {{"c_in", c->c_in},     {"c_out", c->c_out},
                     {"k_h", c->k_h},       {"k_w", c->k_w},
                     {"h_in", c->h_in},     {"w_in", c->w_in},
                     {"h_out", c->h_out},   {"w_out", c->w_out},
                     {"stride", c->stride}, {"padding", c->padding},
                     {"depthwise", c->depthwise}};
    } else if (const auto* p = n.pool()) {
      jn["attrs"] = {{"k_h", p->k_h}, {"k_w", p->k_w}, {"stride", p->stride}};
    } else if (const auto* q = n.quant()) {
      jn["attrs"] = json::object();
      if (q->channels) jn["attrs"]["channels"] = *q->channels;
    }
    nodes.push_back(std::move(jn));
  }
  json edges = json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"dims", e.tensor.dims},
                     {"bit_width", e.tensor.bit_width}});
  }
  root["nodes"] = std::move(nodes);
  root["edges"] = std::move(edges);
  root["inputs"] = g.inputs;
  root["outputs"] = g.outputs;
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string edge_name(std::size_t i) { return "edge[" + std::to_string(i) + "]"; }

std::string dims_str(const std::vector<std::int64_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

class Validator {
 public:
  Validator(const Graph& g, const BitWidthPolicy& policy) : g_(g), policy_(policy) {}

  std::vector<Diagnostic> run() {
    check_nodes();
    check_edges();
    check_boundaries();
    bool acyclic = check_cycles();
    if (acyclic) check_reachability();
    check_degrees();
    check_shapes();
    return std::move(diags_);
  }

 private:
  void add(DiagnosticKind kind, std::string subject, std::string message) {
    diags_.push_back({kind, std::move(subject), std::move(message)});
  }

  bool is_node(const std::string& id) const { return ids_.count(id) > 0; }

  void check_nodes() {
    for (const auto& n : g_.nodes) {
      if (n.id.empty() || n.id.front() == '@') {
        add(DiagnosticKind::kSchema, n.id, "node id must be non-empty and not start with '@'");
      }
      if (!ids_.insert(n.id).second) {
        add(DiagnosticKind::kDuplicateId, n.id, "duplicate node id");
      }
      check_attrs(n);
    }
  }

  void check_attrs(const Node& n) {
    const bool wants_conv = n.kind == NodeKind::kConv || n.kind == NodeKind::kGemm ||
                            n.kind == NodeKind::kMatMul;
    if (wants_conv) {
      const auto* c = n.conv();
      if (!c) {
        add(DiagnosticKind::kSchema, n.id, "node requires convolution attrs");
        return;
      }
      for (auto v : {c->c_in, c->c_out, c->k_h, c->k_w, c->h_in, c->w_in, c->h_out,
                     c->w_out, c->stride}) {
        if (v < 1) {
          add(DiagnosticKind::kSchema, n.id, "convolution attrs must be positive");
          return;
        }
      }
      if (c->padding < 0) {
        add(DiagnosticKind::kSchema, n.id, "padding must be non-negative");
        return;
      }
      if (c->h_out != c->expected_h_out() || c->w_out != c->expected_w_out()) {
        add(DiagnosticKind::kShape, n.id,
            "output size " + std::to_string(c->h_out) + "x" + std::to_string(c->w_out) +
                " does not match stride formula (" + std::to_string(c->expected_h_out()) +
                "x" + std::to_string(c->expected_w_out()) + ")");
      }
      if (c->depthwise && c->c_in != c->c_out) {
        add(DiagnosticKind::kShape, n.id, "depthwise convolution requires c_in == c_out");
      }
      return;
    }
    switch (n.kind) {
      case NodeKind::kMaxPool: {
        const auto* p = n.pool();
        if (!p) {
          add(DiagnosticKind::kSchema, n.id, "MaxPool requires kernel attrs");
        } else if (p->k_h < 1 || p->k_w < 1 || p->stride < 1) {
          add(DiagnosticKind::kSchema, n.id, "pooling attrs must be positive");
        }
        break;
      }
      case NodeKind::kQuant:
        if (std::holds_alternative<QuantAttrs>(n.attrs)) {
          const auto& ch = n.quant()->channels;
          if (ch && *ch < 1) add(DiagnosticKind::kSchema, n.id, "channels must be positive");
        } else if (!std::holds_alternative<std::monostate>(n.attrs)) {
          add(DiagnosticKind::kSchema, n.id, "Quant node carries foreign attrs");
        }
        break;
      case NodeKind::kAct:
        if (!std::holds_alternative<std::monostate>(n.attrs)) {
          add(DiagnosticKind::kSchema, n.id, "Act nodes take no attrs");
        }
        break;
      default:
        break;
    }
  }

  void check_edges() {
    for (std::size_t i = 0; i < g_.edges.size(); ++i) {
      const auto& e = g_.edges[i];
      const bool src_ok = e.from_graph_input() || is_node(e.src);
      const bool dst_ok = e.to_graph_output() || is_node(e.dst);
      if (!src_ok) add(DiagnosticKind::kUnresolvedEdge, edge_name(i), "unknown source '" + e.src + "'");
      if (!dst_ok) add(DiagnosticKind::kUnresolvedEdge, edge_name(i), "unknown destination '" + e.dst + "'");
      if (e.src == e.dst) add(DiagnosticKind::kCycle, edge_name(i), "self-loop on '" + e.src + "'");
      if (e.from_graph_input() && e.to_graph_output()) {
        add(DiagnosticKind::kSchema, edge_name(i), "edge connects graph input directly to output");
      }
      if (e.tensor.dims.empty() ||
          std::any_of(e.tensor.dims.begin(), e.tensor.dims.end(), [](auto d) { return d < 1; })) {
        add(DiagnosticKind::kSchema, edge_name(i), "tensor dims must be non-empty and positive");
      }
      if (!policy_.allows(e.tensor.bit_width)) {
        add(DiagnosticKind::kBitWidth, edge_name(i),
            "bit_width " + std::to_string(e.tensor.bit_width) + " not allowed");
      }
    }
  }

  void check_boundary_list(const std::vector<std::size_t>& list, bool inputs) {
    const char* what = inputs ? "inputs" : "outputs";
    std::set<std::size_t> seen;
    for (auto i : list) {
      if (i >= g_.edges.size()) {
        add(DiagnosticKind::kBoundary, what, "edge index " + std::to_string(i) + " out of range");
        continue;
      }
      const auto& e = g_.edges[i];
      if (inputs ? !e.from_graph_input() : !e.to_graph_output()) {
        add(DiagnosticKind::kBoundary, edge_name(i),
            std::string("listed in ") + what + " but not a boundary edge");
      }
      if (!seen.insert(i).second) {
        add(DiagnosticKind::kBoundary, edge_name(i), std::string("listed twice in ") + what);
      }
    }
    for (std::size_t i = 0; i < g_.edges.size(); ++i) {
      const auto& e = g_.edges[i];
      if ((inputs ? e.from_graph_input() : e.to_graph_output()) && !seen.count(i)) {
        add(DiagnosticKind::kBoundary, edge_name(i), std::string("boundary edge missing from ") + what);
      }
    }
  }

  void check_boundaries() {
    check_boundary_list(g_.inputs, true);
    check_boundary_list(g_.outputs, false);
  }

  bool check_cycles() {
    auto order = topological_order(g_);
    std::unordered_set<std::string> placed(order.begin(), order.end());
    std::string members;
    for (const auto& n : g_.nodes) {
      if (!placed.count(n.id) && ids_.count(n.id)) {
        if (!members.empty()) members += ", ";
        members += n.id;
      }
    }
    if (members.empty()) return true;
    add(DiagnosticKind::kCycle, "graph", "nodes on a cycle: " + members);
    return false;
  }

  void check_reachability() {
    std::unordered_set<std::string> seen;
    std::queue<std::string> frontier;
    for (const auto& e : g_.edges) {
      if (e.from_graph_input() && is_node(e.dst) && seen.insert(e.dst).second) frontier.push(e.dst);
    }
    while (!frontier.empty()) {
      auto id = frontier.front();
      frontier.pop();
      for (const auto& e : g_.edges) {
        if (e.src == id && is_node(e.dst) && seen.insert(e.dst).second) frontier.push(e.dst);
      }
    }
    for (const auto& n : g_.nodes) {
      if (!seen.count(n.id)) add(DiagnosticKind::kUnreachable, n.id, "not reachable from any graph input");
    }
  }

  void check_degrees() {
    for (const auto& n : g_.nodes) {
      if (g_.out_edges(n.id).empty()) {
        add(DiagnosticKind::kDeadEnd, n.id, "node has no successor");
      }
    }
  }

  // Shape checks compare every incident edge against the node's declared
  // geometry.
  void check_shapes() {
    for (const auto& n : g_.nodes) {
      auto ins = g_.in_edges(n.id);
      auto outs = g_.out_edges(n.id);
      switch (n.kind) {
        case NodeKind::kConv: {
          const auto* c = n.conv();
          if (!c) break;
          std::vector<std::int64_t> in_dims{c->h_in, c->w_in, c->c_in};
          std::vector<std::int64_t> out_dims{c->h_out, c->w_out, c->c_out};
          for (auto i : ins) expect_dims(n, i, in_dims, "input");
          for (auto i : outs) expect_dims(n, i, out_dims, "output");
          break;
        }
        case NodeKind::kGemm:
        case NodeKind::kMatMul: {
          const auto* c = n.conv();
          if (!c) break;
          for (auto i : ins) expect_count(n, i, c->h_in * c->w_in * c->c_in, "input");
          for (auto i : outs) expect_count(n, i, c->h_out * c->w_out * c->c_out, "output");
          break;
        }
        case NodeKind::kAct:
        case NodeKind::kQuant: {
          if (ins.empty()) break;
          const auto& ref = g_.edges[ins.front()].tensor.dims;
          for (std::size_t k = 1; k < ins.size(); ++k) expect_dims(n, ins[k], ref, "input");
          for (auto i : outs) expect_dims(n, i, ref, "output");
          if (const auto* q = n.quant(); q && q->channels && !ref.empty() &&
                                         *q->channels != ref.back() && *q->channels != 1) {
            add(DiagnosticKind::kShape, n.id,
                "channels " + std::to_string(*q->channels) + " does not match tensor channels " +
                    std::to_string(ref.back()));
          }
          break;
        }
        case NodeKind::kMaxPool: {
          const auto* p = n.pool();
          if (!p || ins.empty()) break;
          const auto& ref = g_.edges[ins.front()].tensor.dims;
          if (ref.size() != 3) {
            add(DiagnosticKind::kShape, n.id, "MaxPool input must be HWC, got " + dims_str(ref));
            break;
          }
          if (ref[0] < p->k_h || ref[1] < p->k_w) {
            add(DiagnosticKind::kShape, n.id, "pooling kernel larger than input");
            break;
          }
          std::vector<std::int64_t> out_dims{(ref[0] - p->k_h) / p->stride + 1,
                                             (ref[1] - p->k_w) / p->stride + 1, ref[2]};
          for (std::size_t k = 1; k < ins.size(); ++k) expect_dims(n, ins[k], ref, "input");
          for (auto i : outs) expect_dims(n, i, out_dims, "output");
          break;
        }
      }
    }
  }

  void expect_dims(const Node& n, std::size_t edge, const std::vector<std::int64_t>& want,
                   const char* role) {
    const auto& got = g_.edges[edge].tensor.dims;
    if (got != want) {
      add(DiagnosticKind::kShape, n.id,
          std::string(role) + " " + edge_name(edge) + " has dims " + dims_str(got) +
              ", expected " + dims_str(want));
    }
  }

  void expect_count(const Node& n, std::size_t edge, std::int64_t want, const char* role) {
    auto got = g_.edges[edge].tensor.num_elements();
    if (got != want) {
      add(DiagnosticKind::kShape, n.id,
          std::string(role) + " " + edge_name(edge) + " has " + std::to_string(got) +
              " elements, expected " + std::to_string(want));
    }
  }

  const Graph& g_;
  const BitWidthPolicy& policy_;
  std::unordered_set<std::string> ids_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate_graph(const Graph& g, const BitWidthPolicy& policy) {
  return Validator(g, policy).run();
}

std::vector<std::string> topological_order(const Graph& g) {
  std::map<std::string, int> indegree;
  for (const auto& n : g.nodes) indegree.emplace(n.id, 0);
  std::unordered_map<std::string, std::vector<std::string>> succ;
  for (const auto& e : g.edges) {
    if (!indegree.count(e.src) || !indegree.count(e.dst)) continue;
    succ[e.src].push_back(e.dst);
    ++indegree[e.dst];
  }
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<std::string> order;
  order.reserve(indegree.size());
  while (!ready.empty()) {
    auto id = ready.top();
    ready.pop();
    order.push_back(id);
    for (const auto& next : succ[id]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }
  return order;
}

}  // namespace qscope

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

#include "qscope/cost_model.hpp"

#include <sstream>

#include "json.hpp"
#include "qscope/error.hpp"

namespace qscope {

namespace {

std::int64_t pow2(int exponent) { return std::int64_t{1} << exponent; }

// ceil(log2(x)) for x >= 1.
std::int64_t ceil_log2(std::int64_t x) {
  std::int64_t bits = 0;
  while ((std::int64_t{1} << bits) < x) ++bits;
  return bits;
}

std::int64_t filter_inputs(const ConvAttrs& a) {
  return (a.depthwise ? 1 : a.c_in) * a.k_h * a.k_w;
}

void check_lut_exponent(int exponent, const CostOptions& opts) {
  if (exponent > opts.lut_exponent_cap) {
    throw Error(ErrorCode::kWidthOverflow,
                "LUT index width " + std::to_string(exponent) + " exceeds cap " +
                    std::to_string(opts.lut_exponent_cap));
  }
}

}  // namespace

std::int64_t conv_weight_bits(const ConvAttrs& attrs, int weight_bits) {
  return attrs.c_out * filter_inputs(attrs) * weight_bits;
}

std::int64_t conv_bias_bits(const ConvAttrs& attrs, int acc_bits) {
  return attrs.c_out * acc_bits;
}

CostResult conv_costs(const ConvAttrs& a, int input_bits, int weight_bits, int acc_bits,
                      Implementation impl, const CostOptions& opts) {
  if (impl != Implementation::kIm2col && impl != Implementation::kGemm &&
      impl != Implementation::kLut) {
    throw Error(ErrorCode::kIllegalChoice,
                std::string(to_string(impl)) + " cannot implement a linear layer");
  }
  const std::int64_t positions = a.h_out * a.w_out;
  CostResult r;
  r.memory.input_bits = positions * (a.c_in * a.k_h * a.k_w) * input_bits;
  r.memory.param_bits = conv_weight_bits(a, weight_bits) + conv_bias_bits(a, acc_bits);
  r.memory.output_bits = a.c_out * positions * acc_bits;

  const std::int64_t per_pixel = a.c_out * filter_inputs(a);
  const std::int64_t macs = per_pixel * positions;
  r.costs.bops = macs * (1 + acc_bits + weight_bits + input_bits);
  if (impl == Implementation::kLut) {
    check_lut_exponent(weight_bits + input_bits, opts);
    r.memory.temp_bits = pow2(weight_bits + input_bits) * acc_bits;
  } else {
    r.costs.macs_per_pixel = per_pixel;
    r.costs.macs = macs;
  }
  return r;
}

CostResult gemm_costs(std::int64_t in_features, std::int64_t out_features, int input_bits,
                      int weight_bits, int acc_bits, Implementation impl,
                      const CostOptions& opts) {
  if (in_features < 1 || out_features < 1) {
    throw Error(ErrorCode::kInvariantViolation, "feature counts must be positive");
  }
  ConvAttrs a;
  a.c_in = in_features;
  a.c_out = out_features;
  return conv_costs(a, input_bits, weight_bits, acc_bits, impl, opts);
}

std::int64_t quant_structure_bits(std::int64_t channels, int acc_bits, int out_bits,
                                  const ImplChoice& choice) {
  switch (choice.implementation) {
    case Implementation::kThresholds: {
      std::int64_t bits = (pow2(out_bits) - 1) * acc_bits;
      return choice.filter_wise ? bits * channels : bits;
    }
    case Implementation::kLut:
      return pow2(acc_bits) * out_bits;
    default:
      return 0;
  }
}

CostResult quant_costs(std::int64_t num_inputs, std::int64_t channels, int acc_bits, int out_bits,
                       const ImplChoice& choice, const CostOptions& opts) {
  if (num_inputs < 1 || channels < 1) {
    throw Error(ErrorCode::kInvariantViolation, "quantization needs at least one input");
  }
  CostResult r;
  r.memory.input_bits = num_inputs * acc_bits;
  r.memory.output_bits = num_inputs * out_bits;
  switch (choice.implementation) {
    case Implementation::kThresholds: {
      const std::int64_t thresholds = pow2(out_bits) - 1;
      r.memory.param_bits = quant_structure_bits(channels, acc_bits, out_bits, choice);
      r.costs.bops = num_inputs * ceil_log2(thresholds) * acc_bits;
      break;
    }
    case Implementation::kLut:
      check_lut_exponent(acc_bits, opts);
      r.memory.param_bits = quant_structure_bits(channels, acc_bits, out_bits, choice);
      r.costs.bops = num_inputs * opts.lut_quant_access_bits.value_or(acc_bits);
      break;
    case Implementation::kDyadic:
      r.memory.param_bits =
          std::int64_t{opts.dyadic_scale_bits} * (choice.filter_wise ? channels : 1);
      r.costs.bops = num_inputs * choice.num_shifts;
      break;
    default:
      throw Error(ErrorCode::kIllegalChoice,
                  std::string(to_string(choice.implementation)) + " cannot implement Quant");
  }
  return r;
}

NodeCosts act_costs(std::int64_t num_inputs, int input_bits) {
  if (num_inputs < 1) throw Error(ErrorCode::kInvariantViolation, "activation needs inputs");
  NodeCosts c;
  c.bops = num_inputs * (input_bits + 1);
  return c;
}

NodeCosts pool_costs(std::int64_t num_windows, int input_bits, std::int64_t k_w,
                     std::int64_t k_h) {
  if (num_windows < 1 || k_w < 1 || k_h < 1) {
    throw Error(ErrorCode::kInvariantViolation, "pooling needs windows and a kernel");
  }
  NodeCosts c;
  c.bops = num_windows * (input_bits * k_w * k_h);
  return c;
}

const DecoratedNode* DecoratedGraph::find(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

DecoratedGraph decorate(const Graph& g, const BoundConfig& bound, const CostOptions& opts) {
  DecoratedGraph dg;
  dg.base = g;
  dg.edge_bits.resize(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) dg.edge_bits[i] = g.edges[i].tensor.bit_width;

  for (const auto& id : topological_order(g)) {
    const Node& node = *g.find_node(id);
    auto choice_it = bound.find(id);
    if (choice_it == bound.end()) {
      throw Error(ErrorCode::kUnresolved, "node has no implementation choice", id);
    }
    const auto ins = g.in_edges(id);
    const auto outs = g.out_edges(id);
    if (ins.empty() || outs.empty()) {
      throw Error(ErrorCode::kSchema, "node must have input and output edges", id);
    }
    const Edge& in = g.edges[ins.front()];
    const Edge& out = g.edges[outs.front()];

    DecoratedNode d;
    d.id = id;
    d.kind = node.kind;
    d.lowered_kind = node.kind;
    d.choice = choice_it->second;
    d.input_elements = in.tensor.num_elements();
    d.output_elements = out.tensor.num_elements();
    const int in_bits = dg.edge_bits[ins.front()];
    int produced_bits = out.tensor.bit_width;

    try {
      switch (node.kind) {
        case NodeKind::kConv:
        case NodeKind::kGemm:
        case NodeKind::kMatMul: {
          const ConvAttrs& a = *node.conv();
          const int weight_bits = d.choice.bit_width.value_or(in_bits);
          const int acc_bits = out.tensor.bit_width;
          auto r = conv_costs(a, in_bits, weight_bits, acc_bits, d.choice.implementation, opts);
          d.costs = r.costs;
          d.memory = r.memory;
          d.widths = {in_bits, weight_bits, acc_bits, acc_bits};
          d.out_channels = a.c_out;
          d.depthwise = a.depthwise;
          if (node.kind == NodeKind::kConv && d.choice.implementation != Implementation::kLut) {
            d.lowered_kind = NodeKind::kMatMul;
          }
          break;
        }
        case NodeKind::kQuant: {
          const int out_bits = d.choice.bit_width.value_or(out.tensor.bit_width);
          const auto* q = node.quant();
          const std::int64_t channels =
              q && q->channels ? *q->channels : in.tensor.dims.back();
          auto r = quant_costs(d.input_elements, channels, in_bits, out_bits, d.choice, opts);
          d.costs = r.costs;
          d.memory = r.memory;
          d.structure_bits = quant_structure_bits(channels, in_bits, out_bits, d.choice);
          d.widths = {in_bits, 0, in_bits, out_bits};
          d.out_channels = in.tensor.dims.back();
          produced_bits = out_bits;
          break;
        }
        case NodeKind::kAct:
          d.costs = act_costs(d.input_elements, in_bits);
          d.memory.input_bits = d.input_elements * in_bits;
          d.memory.output_bits = d.output_elements * in_bits;
          d.widths = {in_bits, 0, 0, in_bits};
          d.out_channels = out.tensor.dims.back();
          produced_bits = in_bits;
          break;
        case NodeKind::kMaxPool: {
          const PoolAttrs& p = *node.pool();
          d.costs = pool_costs(d.output_elements, in_bits, p.k_w, p.k_h);
          d.memory.input_bits = d.input_elements * in_bits;
          d.memory.output_bits = d.output_elements * in_bits;
          d.widths = {in_bits, 0, 0, in_bits};
          d.out_channels = out.tensor.dims.back();
          produced_bits = in_bits;
          break;
        }
      }
    } catch (const Error& e) {
      if (!e.subject().empty()) throw;
      throw Error(e.code(), e.message(), id);
    }
    for (auto i : outs) dg.edge_bits[i] = produced_bits;
    dg.nodes.push_back(std::move(d));
  }
  return dg;
}

std::string decorated_to_json(const DecoratedGraph& dg) {
  using nlohmann::json;
  json nodes = json::array();
  std::int64_t macs = 0, bops = 0, param = 0, temp = 0;
  for (const auto& n : dg.nodes) {
    json j = json::object();
    j["id"] = n.id;
    j["kind"] = std::string(to_string(n.kind));
    j["lowered_kind"] = std::string(to_string(n.lowered_kind));
    j["implementation"] = std::string(to_string(n.choice.implementation));
    j["bit_widths"] = {{"input", n.widths.input},
                       {"weight", n.widths.weight},
                       {"accumulator", n.widths.accumulator},
                       {"output", n.widths.output}};
    j["macs"] = n.costs.macs;
    j["macs_per_pixel"] = n.costs.macs_per_pixel;
    j["bops"] = n.costs.bops;
    j["input_bytes"] = n.memory.input_bytes();
    j["param_bytes"] = n.memory.param_bytes();
    j["output_bytes"] = n.memory.output_bytes();
    j["temp_bytes"] = n.memory.temp_bytes();
    nodes.push_back(std::move(j));
    macs += n.costs.macs;
    bops += n.costs.bops;
    param += n.memory.param_bytes();
    temp += n.memory.temp_bytes();
  }
  json root = json::object();
  root["format_version"] = 1;
  root["nodes"] = std::move(nodes);
  root["totals"] = {{"macs", macs}, {"bops", bops}, {"param_bytes", param}, {"temp_bytes", temp}};
  return root.dump(2) + "\n";
}

std::string decorated_to_csv(const DecoratedGraph& dg) {
  std::ostringstream out;
  out << "id,kind,lowered_kind,implementation,macs,bops,input_bytes,param_bytes,output_bytes,"
         "temp_bytes\n";
  for (const auto& n : dg.nodes) {
    out << n.id << ',' << to_string(n.kind) << ',' << to_string(n.lowered_kind) << ','
        << to_string(n.choice.implementation) << ',' << n.costs.macs << ',' << n.costs.bops << ','
        << n.memory.input_bytes() << ',' << n.memory.param_bytes() << ','
        << n.memory.output_bytes() << ',' << n.memory.temp_bytes() << '\n';
  }
  return out.str();
}

}  // namespace qscope

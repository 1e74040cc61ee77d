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

#include "qscope/impl_config.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qscope/error.hpp"

namespace qscope {

std::string_view to_string(Implementation impl) {
  switch (impl) {
    case Implementation::kIm2col: return "im2col";
    case Implementation::kLut: return "lut";
    case Implementation::kThresholds: return "thresholds";
    case Implementation::kDyadic: return "dyadic";
    case Implementation::kComparator: return "comparator";
    case Implementation::kGemm: return "gemm";
  }
  return "?";
}

std::optional<Implementation> parse_implementation(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (auto impl : {Implementation::kIm2col, Implementation::kLut, Implementation::kThresholds,
                    Implementation::kDyadic, Implementation::kComparator, Implementation::kGemm}) {
    if (to_string(impl) == lower) return impl;
  }
  return std::nullopt;
}

bool is_legal(NodeKind kind, Implementation impl) {
  switch (kind) {
    case NodeKind::kConv:
    case NodeKind::kGemm:
    case NodeKind::kMatMul:
      return impl == Implementation::kIm2col || impl == Implementation::kLut ||
             impl == Implementation::kGemm;
    case NodeKind::kQuant:
      return impl == Implementation::kThresholds || impl == Implementation::kLut ||
             impl == Implementation::kDyadic;
    case NodeKind::kAct:
    case NodeKind::kMaxPool:
      return impl == Implementation::kComparator;
  }
  return false;
}

namespace {

std::string strip_elisions(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string out, line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t");
    auto last = line.find_last_not_of(" \t\r");
    if (first != std::string::npos && line.substr(first, last - first + 1) == "...") continue;
    out += line;
    out += '\n';
  }
  return out;
}

template <typename T>
T scalar_as(const YAML::Node& n, const std::string& field, const std::string& where) {
  if (!n.IsScalar()) {
    throw Error(ErrorCode::kSchema, "field '" + field + "' must be a scalar", where);
  }
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorCode::kSchema, "field '" + field + "' has the wrong type", where);
  }
}

ImplChoice decode_choice(const YAML::Node& node, const std::string& where,
                         const BitWidthPolicy& policy) {
  if (!node.IsMap()) throw Error(ErrorCode::kSchema, "entry must be a mapping", where);
  ImplChoice choice;
  bool has_impl = false;
  std::set<std::string> seen;
  for (const auto& kv : node) {
    auto key = kv.first.as<std::string>();
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kSyntax, "duplicate key '" + key + "'", where);
    }
    if (key == "implementation") {
      auto name = scalar_as<std::string>(kv.second, key, where);
      auto impl = parse_implementation(name);
      if (!impl) {
        throw Error(ErrorCode::kUnknownImplementation, "unknown implementation '" + name + "'",
                    where);
      }
      choice.implementation = *impl;
      has_impl = true;
    } else if (key == "bit_width") {
      auto bits = scalar_as<int>(kv.second, key, where);
      if (!policy.allows(bits)) {
        throw Error(ErrorCode::kInvalidBitWidth,
                    "bit_width " + std::to_string(bits) + " not allowed", where);
      }
      choice.bit_width = bits;
    } else if (key == "filter_wise") {
      choice.filter_wise = scalar_as<bool>(kv.second, key, where);
    } else if (key == "num_shifts") {
      choice.num_shifts = scalar_as<int>(kv.second, key, where);
      if (choice.num_shifts < 1) {
        throw Error(ErrorCode::kSchema, "num_shifts must be positive", where);
      }
    } else {
      throw Error(ErrorCode::kSchema, "unknown key '" + key + "'", where);
    }
  }
  if (!has_impl) throw Error(ErrorCode::kSchema, "missing field 'implementation'", where);
  return choice;
}

}  // namespace

ImplConfig parse_impl_config(std::string_view text, const BitWidthPolicy& policy) {
  YAML::Node root;
  try {
    root = YAML::Load(strip_elisions(text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kSyntax, e.what());
  }
  ImplConfig cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw Error(ErrorCode::kSyntax, "implementation file must be a mapping");

  std::set<std::string> seen;
  for (const auto& kv : root) {
    auto key = kv.first.as<std::string>();
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kSyntax, "duplicate entry '" + key + "'", key);
    }
    if (key == "defaults") {
      if (!kv.second.IsMap()) throw Error(ErrorCode::kSchema, "defaults must be a mapping", key);
      std::set<std::string> kinds;
      for (const auto& dk : kv.second) {
        auto kind_name = dk.first.as<std::string>();
        if (!kinds.insert(kind_name).second) {
          throw Error(ErrorCode::kSyntax, "duplicate default '" + kind_name + "'", key);
        }
        auto kind = parse_node_kind(kind_name);
        if (!kind) throw Error(ErrorCode::kSchema, "unknown node kind '" + kind_name + "'", key);
        cfg.defaults[*kind] = decode_choice(dk.second, "defaults." + kind_name, policy);
      }
      continue;
    }
    cfg.bindings[key] = decode_choice(kv.second, key, policy);
  }
  return cfg;
}

namespace {

void check_choice(const Node& n, const ImplChoice& choice) {
  if (!is_legal(n.kind, choice.implementation)) {
    throw Error(ErrorCode::kIllegalChoice,
                std::string(to_string(choice.implementation)) + " is not a valid implementation of " +
                    std::string(to_string(n.kind)),
                n.id);
  }
  if (choice.implementation == Implementation::kGemm) {
    const auto* c = n.conv();
    if (c && (c->k_h != 1 || c->k_w != 1 || c->h_out != 1 || c->w_out != 1)) {
      throw Error(ErrorCode::kIllegalChoice,
                  "gemm requires a 1x1 kernel and a single output position", n.id);
    }
  }
}

}  // namespace

BoundConfig bind_config(const Graph& g, const ImplConfig& c) {
  for (const auto& [id, _] : c.bindings) {
    if (!g.find_node(id)) throw Error(ErrorCode::kUnknownNodeId, "no such node in graph", id);
  }
  BoundConfig bound;
  for (const auto& n : g.nodes) {
    ImplChoice choice;
    if (auto it = c.bindings.find(n.id); it != c.bindings.end()) {
      choice = it->second;
    } else if (auto dt = c.defaults.find(n.kind); dt != c.defaults.end()) {
      choice = dt->second;
    } else if (n.kind == NodeKind::kAct || n.kind == NodeKind::kMaxPool) {
      choice.implementation = Implementation::kComparator;
    } else {
      throw Error(ErrorCode::kUnresolved, "no binding and no default for this node", n.id);
    }
    check_choice(n, choice);
    bound.emplace(n.id, choice);
  }
  return bound;
}

}  // namespace qscope

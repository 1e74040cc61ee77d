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

#include "qscope/platform.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>

#include "json.hpp"
#include "qscope/error.hpp"

namespace qscope {

using nlohmann::json;

void validate_platform(const PlatformSpec& s) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvariantViolation, msg, "platform");
  };
  if (s.num_cores < 1) fail("num_cores must be positive");
  if (s.num_banks < 1) fail("num_banks must be positive");
  if (s.l1_bytes < 1 || s.l2_bytes < 1) fail("memory sizes must be positive");
  if (s.chunk_bytes < 1) fail("chunk_bytes must be positive");
  if (s.l1_bytes > s.l2_bytes) fail("l1_bytes must not exceed l2_bytes");
  if (s.l1_bytes % s.chunk_bytes != 0 || s.l2_bytes % s.chunk_bytes != 0) {
    fail("memory sizes must be multiples of chunk_bytes");
  }
  if (s.l1_bytes % s.num_banks != 0) fail("l1_bytes must split evenly into num_banks");
  if (!(s.dma_l2_l1_bytes_per_cycle > 0) || !(s.dma_l3_l2_bytes_per_cycle > 0)) {
    fail("DMA bandwidths must be positive");
  }
  if (s.dma_setup_cycles < 0) fail("dma_setup_cycles must be non-negative");
  if (!(s.cycles_per_mac > 0) || !(s.cycles_per_bop > 0)) fail("cycle costs must be positive");
  if (!(s.parallel_serial_fraction >= 0 && s.parallel_serial_fraction < 1)) {
    fail("parallel_serial_fraction must be in [0, 1)");
  }
  if (s.lut_contention_granularity_bytes < 1) {
    fail("lut_contention_granularity_bytes must be positive");
  }
}

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::kSchema, msg, "platform"); }

std::int64_t parse_size(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (!v.is_string()) schema("field '" + key + "' must be an integer or a size string");
  auto text = v.get<std::string>();
  std::size_t pos = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    schema("field '" + key + "' is not a size: '" + text + "'");
  }
  auto rest = text.substr(pos);
  rest.erase(std::remove_if(rest.begin(), rest.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             rest.end());
  if (rest.empty() || rest == "B") return value;
  if (rest == "kB" || rest == "KB" || rest == "KiB") return value * 1024;
  schema("field '" + key + "' has unknown unit '" + rest + "'");
}

double parse_real(const json& v, const std::string& key) {
  if (!v.is_number()) schema("field '" + key + "' must be a number");
  return v.get<double>();
}

std::int64_t parse_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) schema("field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

PlatformSpec parse_platform(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSyntax, e.what(), "platform");
  }
  if (!root.is_object()) schema("platform document must be an object");

  PlatformSpec s;
  using Setter = std::function<void(const json&, const std::string&)>;
  const std::map<std::string, Setter> fields{
      {"num_cores", [&](const json& v, const std::string& k) { s.num_cores = static_cast<int>(parse_int(v, k)); }},
      {"num_banks", [&](const json& v, const std::string& k) { s.num_banks = static_cast<int>(parse_int(v, k)); }},
      {"l1_bytes", [&](const json& v, const std::string& k) { s.l1_bytes = parse_size(v, k); }},
      {"l2_bytes", [&](const json& v, const std::string& k) { s.l2_bytes = parse_size(v, k); }},
      {"chunk_bytes", [&](const json& v, const std::string& k) { s.chunk_bytes = parse_size(v, k); }},
      {"dma_l2_l1_bytes_per_cycle", [&](const json& v, const std::string& k) { s.dma_l2_l1_bytes_per_cycle = parse_real(v, k); }},
      {"dma_l3_l2_bytes_per_cycle", [&](const json& v, const std::string& k) { s.dma_l3_l2_bytes_per_cycle = parse_real(v, k); }},
      {"dma_setup_cycles", [&](const json& v, const std::string& k) { s.dma_setup_cycles = parse_int(v, k); }},
      {"cycles_per_mac", [&](const json& v, const std::string& k) { s.cycles_per_mac = parse_real(v, k); }},
      {"cycles_per_bop", [&](const json& v, const std::string& k) { s.cycles_per_bop = parse_real(v, k); }},
      {"parallel_serial_fraction", [&](const json& v, const std::string& k) { s.parallel_serial_fraction = parse_real(v, k); }},
      {"lut_contention_granularity_bytes", [&](const json& v, const std::string& k) { s.lut_contention_granularity_bytes = parse_size(v, k); }},
  };
  for (const auto& [key, value] : root.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) schema("unknown key '" + key + "'");
    it->second(value, key);
  }
  for (const char* required : {"num_cores", "num_banks", "l1_bytes", "l2_bytes"}) {
    if (!root.contains(required)) schema(std::string("missing field '") + required + "'");
  }
  validate_platform(s);
  return s;
}

std::string serialize_platform(const PlatformSpec& s) {
  json j = {
      {"num_cores", s.num_cores},
      {"num_banks", s.num_banks},
      {"l1_bytes", s.l1_bytes},
      {"l2_bytes", s.l2_bytes},
      {"chunk_bytes", s.chunk_bytes},
      {"dma_l2_l1_bytes_per_cycle", s.dma_l2_l1_bytes_per_cycle},
      {"dma_l3_l2_bytes_per_cycle", s.dma_l3_l2_bytes_per_cycle},
      {"dma_setup_cycles", s.dma_setup_cycles},
      {"cycles_per_mac", s.cycles_per_mac},
      {"cycles_per_bop", s.cycles_per_bop},
      {"parallel_serial_fraction", s.parallel_serial_fraction},
      {"lut_contention_granularity_bytes", s.lut_contention_granularity_bytes},
  };
  return j.dump(2) + "\n";
}

double effective_parallelism(const PlatformSpec& spec, WorkKind kind,
                             std::optional<std::int64_t> lut_bytes) {
  if ((kind == WorkKind::kLutAccess) != lut_bytes.has_value()) {
    throw Error(ErrorCode::kInvariantViolation, "lut_bytes is required exactly for LUT access");
  }
  const double m = spec.num_cores;
  const double scaled = m / (1.0 + spec.parallel_serial_fraction * (m - 1.0));
  if (kind != WorkKind::kLutAccess) return scaled;
  const auto g = spec.lut_contention_granularity_bytes;
  const double readers = static_cast<double>(std::max<std::int64_t>(1, (*lut_bytes + g - 1) / g));
  return std::min(scaled, readers);
}

}  // namespace qscope

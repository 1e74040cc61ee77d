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

#include "qscope/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qscope/error.hpp"

namespace qscope {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::kSchema, msg, "sweep"); }

std::int64_t positive_int(const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
    schema(std::string(what) + " entries must be positive integers");
  }
  return v.get<std::int64_t>();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void validate_sweep_spec(const SweepSpec& spec) {
  if (spec.core_counts.empty()) schema("no core counts");
  if (spec.l2_sizes.empty()) schema("no L2 sizes");
  if (spec.variants.empty()) schema("no variants");
  for (int c : spec.core_counts) {
    if (c <= 0) schema("core counts must be positive");
  }
  for (auto s : spec.l2_sizes) {
    if (s <= 0) schema("L2 sizes must be positive");
  }
  for (const auto& v : spec.variants) {
    if (v.accuracy && !(*v.accuracy >= 0.0 && *v.accuracy <= 1.0)) {
      throw Error(ErrorCode::kSchema, "accuracy must lie in [0, 1]", v.label);
    }
  }
}

SweepFile parse_sweep_file(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSyntax, e.what(), "sweep");
  }
  if (!root.is_object()) schema("top level must be an object");
  static const std::set<std::string> known = {"cores", "l2_kb", "variants", "graph", "platform",
                                              "deadline"};
  for (const auto& [key, _] : root.items()) {
    if (!known.count(key)) schema("unknown key '" + key + "'");
  }
  SweepFile f;
  if (!root.contains("cores") || !root["cores"].is_array()) schema("'cores' must be an array");
  if (!root.contains("l2_kb") || !root["l2_kb"].is_array()) schema("'l2_kb' must be an array");
  if (!root.contains("variants") || !root["variants"].is_array()) {
    schema("'variants' must be an array");
  }
  for (const auto& c : root["cores"]) {
    auto v = positive_int(c, "cores");
    if (v > 1 << 16) schema("core count too large");
    f.cores.push_back(static_cast<int>(v));
  }
  for (const auto& s : root["l2_kb"]) f.l2_kb.push_back(positive_int(s, "l2_kb"));
  for (const auto& v : root["variants"]) {
    if (!v.is_object()) schema("variants must be objects");
    SweepFile::Variant var;
    for (const auto& [key, value] : v.items()) {
      if (key == "label" && value.is_string()) {
        var.label = value.get<std::string>();
      } else if (key == "impl_config_path" && value.is_string()) {
        var.impl_config_path = value.get<std::string>();
      } else if (key == "accuracy" && value.is_number()) {
        var.accuracy = value.get<double>();
      } else {
        schema("bad variant field '" + key + "'");
      }
    }
    if (var.label.empty() || var.impl_config_path.empty()) {
      schema("variants need a label and an impl_config_path");
    }
    f.variants.push_back(std::move(var));
  }
  if (root.contains("graph")) {
    if (!root["graph"].is_string()) schema("'graph' must be a path");
    f.graph_path = root["graph"].get<std::string>();
  }
  if (root.contains("platform")) {
    if (!root["platform"].is_string()) schema("'platform' must be a path");
    f.platform_path = root["platform"].get<std::string>();
  }
  if (root.contains("deadline")) f.deadline_cycles = positive_int(root["deadline"], "deadline");
  return f;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path, const SweepOverrides& overrides,
                          const BitWidthPolicy& policy) {
  const SweepFile file = parse_sweep_file(read_file(path));
  const auto dir = path.parent_path();
  auto resolve = [&](const std::string& p) { return dir / std::filesystem::path(p); };

  std::filesystem::path graph_path;
  if (overrides.graph) {
    graph_path = *overrides.graph;
  } else if (file.graph_path) {
    graph_path = resolve(*file.graph_path);
  } else {
    schema("no graph given");
  }
  std::filesystem::path platform_path;
  if (overrides.platform) {
    platform_path = *overrides.platform;
  } else if (file.platform_path) {
    platform_path = resolve(*file.platform_path);
  } else {
    schema("no platform given");
  }

  SweepSpec spec;
  spec.core_counts = file.cores;
  for (auto kb : file.l2_kb) spec.l2_sizes.push_back(kb * 1024);
  spec.graph = parse_graph(read_file(graph_path), policy);
  spec.base = parse_platform(read_file(platform_path));
  for (const auto& v : file.variants) {
    SweepVariant var;
    var.label = v.label;
    var.accuracy = v.accuracy;
    var.config = parse_impl_config(read_file(resolve(v.impl_config_path)), policy);
    spec.variants.push_back(std::move(var));
  }
  auto deadline = overrides.deadline_cycles ? overrides.deadline_cycles : file.deadline_cycles;
  if (deadline) spec.deadline = Deadline{*deadline};
  validate_sweep_spec(spec);
  return spec;
}

namespace {

struct Prepared {
  std::optional<DecoratedGraph> graph;
  std::string error;
  std::int64_t memory_bytes = 0;
};

Prepared prepare(const SweepSpec& spec, const SweepVariant& v) {
  Prepared p;
  try {
    p.graph = decorate(spec.graph, bind_config(spec.graph, v.config), spec.cost);
    for (const auto& n : p.graph->nodes) p.memory_bytes += n.memory.param_bytes() + n.memory.temp_bytes();
  } catch (const Error& e) {
    p.error = e.what();
  }
  return p;
}

SweepRow evaluate(const SweepSpec& spec, const SweepVariant& v, const Prepared& p, int cores,
                  std::int64_t l2) {
  SweepRow row;
  row.label = v.label;
  row.cores = cores;
  row.l2_bytes = l2;
  row.accuracy = v.accuracy;
  row.memory_bytes = p.memory_bytes;
  if (!p.graph) {
    row.reason = p.error;
    return row;
  }
  PlatformSpec platform = spec.base;
  platform.num_cores = cores;
  platform.l2_bytes = l2;
  try {
    const Schedule s = refine_and_schedule(*p.graph, platform, spec.deadline, spec.schedule);
    row.schedulable = true;
    row.total_cycles = s.report.total_cycles;
    for (const auto& l : s.report.layers) {
      row.layer_cycles.emplace_back(l.id, l.total_cycles);
      row.l1_peak_bytes = std::max(row.l1_peak_bytes, l.l1_peak_bytes);
      row.l2_peak_bytes = std::max(row.l2_peak_bytes, l.l2_peak_bytes);
    }
    row.deadline_met = s.report.feasible;
    row.slack_cycles = s.report.slack_cycles;
  } catch (const Error& e) {
    row.reason = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  validate_sweep_spec(spec);
  std::vector<Prepared> prepared;
  for (const auto& v : spec.variants) prepared.push_back(prepare(spec, v));

  struct Point {
    std::size_t variant;
    int cores;
    std::int64_t l2;
  };
  std::vector<Point> points;
  for (std::size_t v = 0; v < spec.variants.size(); ++v) {
    for (int c : spec.core_counts) {
      for (auto l2 : spec.l2_sizes) points.push_back({v, c, l2});
    }
  }

  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const auto& pt = points[i];
      rows[i] = evaluate(spec, spec.variants[pt.variant], prepared[pt.variant], pt.cores, pt.l2);
    }
  };
  unsigned n = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, points.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::optional<Objective> parse_objective(std::string_view name) {
  if (name == "latency") return Objective::kLatency;
  if (name == "memory") return Objective::kMemory;
  if (name == "accuracy") return Objective::kAccuracy;
  return std::nullopt;
}

std::vector<SweepRow> pareto_filter(const std::vector<SweepRow>& rows,
                                    const std::set<Objective>& objectives) {
  if (objectives.empty()) {
    throw Error(ErrorCode::kInvariantViolation, "at least one objective is required", "pareto");
  }
  const bool use_acc = objectives.count(Objective::kAccuracy) > 0;
  if (use_acc) {
    for (const auto& r : rows) {
      if (!r.accuracy) throw Error(ErrorCode::kMissingAccuracy, "row has no accuracy", r.label);
    }
  }
  // Every objective as a value to minimize.
  auto key = [&](const SweepRow& r) {
    std::vector<double> k;
    if (objectives.count(Objective::kLatency)) k.push_back(static_cast<double>(r.total_cycles));
    if (objectives.count(Objective::kMemory)) k.push_back(static_cast<double>(r.memory_bytes));
    if (use_acc) k.push_back(-*r.accuracy);
    return k;
  };
  auto dominates = [](const std::vector<double>& a, const std::vector<double>& b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > b[i]) return false;
      if (a[i] < b[i]) strictly = true;
    }
    return strictly;
  };
  std::vector<const SweepRow*> candidates;
  for (const auto& r : rows) {
    if (r.schedulable) candidates.push_back(&r);
  }
  std::vector<std::vector<double>> keys;
  for (const auto* r : candidates) keys.push_back(key(*r));
  std::vector<SweepRow> front;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
      dominated = j != i && dominates(keys[j], keys[i]);
    }
    if (!dominated) front.push_back(*candidates[i]);
  }
  return front;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "label,cores,l2_bytes,schedulable,reason,total_cycles,l1_peak_bytes,l2_peak_bytes,"
         "memory_bytes,deadline_met,slack_cycles,accuracy,layer_cycles\n";
  for (const auto& r : rows) {
    std::string layers;
    for (const auto& [id, cycles] : r.layer_cycles) {
      if (!layers.empty()) layers += ';';
      layers += id + ':' + std::to_string(cycles);
    }
    out << csv_field(r.label) << ',' << r.cores << ',' << r.l2_bytes << ','
        << (r.schedulable ? "true" : "false") << ',' << csv_field(r.reason) << ','
        << r.total_cycles << ',' << r.l1_peak_bytes << ',' << r.l2_peak_bytes << ','
        << r.memory_bytes << ',' << (r.deadline_met ? (*r.deadline_met ? "true" : "false") : "")
        << ',' << (r.slack_cycles ? std::to_string(*r.slack_cycles) : "") << ','
        << (r.accuracy ? format_double(*r.accuracy) : "") << ',' << csv_field(layers) << '\n';
  }
  return out.str();
}

std::string rows_to_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json layers = json::array();
    for (const auto& [id, cycles] : r.layer_cycles) layers.push_back({{"id", id}, {"cycles", cycles}});
    json o = {{"label", r.label},
              {"cores", r.cores},
              {"l2_bytes", r.l2_bytes},
              {"schedulable", r.schedulable},
              {"reason", r.reason},
              {"total_cycles", r.total_cycles},
              {"l1_peak_bytes", r.l1_peak_bytes},
              {"l2_peak_bytes", r.l2_peak_bytes},
              {"memory_bytes", r.memory_bytes},
              {"layer_cycles", std::move(layers)}};
    o["deadline_met"] = r.deadline_met ? json(*r.deadline_met) : json(nullptr);
    o["slack_cycles"] = r.slack_cycles ? json(*r.slack_cycles) : json(nullptr);
    o["accuracy"] = r.accuracy ? json(*r.accuracy) : json(nullptr);
    arr.push_back(std::move(o));
  }
  json root = {{"format_version", 1}, {"rows", std::move(arr)}};
  return root.dump(2) + "\n";
}

std::vector<SweepRow> rows_from_json(std::string_view text) {
  std::vector<SweepRow> rows;
  try {
    const json root = json::parse(text);
    if (root.at("format_version").get<int>() != 1) schema("unsupported format_version");
    for (const auto& o : root.at("rows")) {
      SweepRow r;
      r.label = o.at("label").get<std::string>();
      r.cores = o.at("cores").get<int>();
      r.l2_bytes = o.at("l2_bytes").get<std::int64_t>();
      r.schedulable = o.at("schedulable").get<bool>();
      r.reason = o.at("reason").get<std::string>();
      r.total_cycles = o.at("total_cycles").get<std::int64_t>();
      r.l1_peak_bytes = o.at("l1_peak_bytes").get<std::int64_t>();
      r.l2_peak_bytes = o.at("l2_peak_bytes").get<std::int64_t>();
      r.memory_bytes = o.at("memory_bytes").get<std::int64_t>();
      for (const auto& l : o.at("layer_cycles")) {
        r.layer_cycles.emplace_back(l.at("id").get<std::string>(), l.at("cycles").get<std::int64_t>());
      }
      if (!o.at("deadline_met").is_null()) r.deadline_met = o["deadline_met"].get<bool>();
      if (!o.at("slack_cycles").is_null()) r.slack_cycles = o["slack_cycles"].get<std::int64_t>();
      if (!o.at("accuracy").is_null()) r.accuracy = o["accuracy"].get<double>();
      rows.push_back(std::move(r));
    }
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSyntax, e.what(), "sweep");
  } catch (const json::exception& e) {
    schema(e.what());
  }
  return rows;
}

}  // namespace qscope

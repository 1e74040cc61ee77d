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

// Design-space sweeps: every (core count, L2 size, implementation variant)
// point is scheduled; the rows can be reduced to their Pareto front.

#ifndef QSCOPE_SWEEP_HPP_
#define QSCOPE_SWEEP_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qscope/cost_model.hpp"
#include "qscope/graph.hpp"
#include "qscope/impl_config.hpp"
#include "qscope/platform.hpp"
#include "qscope/scheduler.hpp"

namespace qscope {

struct SweepVariant {
  std::string label;
  ImplConfig config;
  std::optional<double> accuracy;  // measured elsewhere, passed through
};

struct SweepSpec {
  std::vector<int> core_counts;
  std::vector<std::int64_t> l2_sizes;  // bytes
  std::vector<SweepVariant> variants;
  Graph graph;
  PlatformSpec base;
  std::optional<Deadline> deadline;
  CostOptions cost;
  ScheduleOptions schedule;
};

// Throws kSchema on empty axes, non-positive sizes or accuracy outside [0, 1].
void validate_sweep_spec(const SweepSpec& spec);

// On-disk sweep description. Paths are relative to the sweep file.
struct SweepFile {
  std::vector<int> cores;
  std::vector<std::int64_t> l2_kb;
  struct Variant {
    std::string label;
    std::string impl_config_path;
    std::optional<double> accuracy;
  };
  std::vector<Variant> variants;
  std::optional<std::string> graph_path;
  std::optional<std::string> platform_path;
  std::optional<std::int64_t> deadline_cycles;
};

SweepFile parse_sweep_file(std::string_view text);

// Overrides take precedence over the paths and deadline in the file.
struct SweepOverrides {
  std::optional<std::filesystem::path> graph;
  std::optional<std::filesystem::path> platform;
  std::optional<std::int64_t> deadline_cycles;
};

// Reads the sweep file and everything it references. I/O failures raise kIo.
SweepSpec load_sweep_spec(const std::filesystem::path& path, const SweepOverrides& overrides = {},
                          const BitWidthPolicy& policy = {});

struct SweepRow {
  std::string label;
  int cores = 0;
  std::int64_t l2_bytes = 0;
  bool schedulable = false;
  std::string reason;  // why the point could not be scheduled
  std::int64_t total_cycles = 0;
  std::vector<std::pair<std::string, std::int64_t>> layer_cycles;
  std::int64_t l1_peak_bytes = 0;
  std::int64_t l2_peak_bytes = 0;
  std::optional<bool> deadline_met;
  std::optional<std::int64_t> slack_cycles;
  std::optional<double> accuracy;
  std::int64_t memory_bytes = 0;  // parameters plus resident structures

  bool operator==(const SweepRow&) const = default;
};

struct SweepOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

// Rows ordered by variant, then cores, then L2 size, whatever the thread
// count. Failing points become unschedulable rows.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

enum class Objective { kLatency, kMemory, kAccuracy };

std::optional<Objective> parse_objective(std::string_view name);

// Schedulable rows not dominated on the chosen objectives, in input order.
// Rows with identical objective values are all kept.
std::vector<SweepRow> pareto_filter(const std::vector<SweepRow>& rows,
                                    const std::set<Objective>& objectives);

// Columns: label,cores,l2_bytes,schedulable,reason,total_cycles,l1_peak_bytes,
// l2_peak_bytes,memory_bytes,deadline_met,slack_cycles,accuracy,layer_cycles
std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::string rows_to_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> rows_from_json(std::string_view text);

}  // namespace qscope

#endif  // QSCOPE_SWEEP_HPP_

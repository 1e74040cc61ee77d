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

// Command-line front end. Exit codes: 0 success, 1 domain error (cycle,
// illegal choice, untileable layer, ...), 2 usage, I/O or parse failure.

#ifndef QSCOPE_TOOLS_CLI_HPP_
#define QSCOPE_TOOLS_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

enum class Format { kJson, kCsv };

int cmd_validate(const std::filesystem::path& graph, std::ostream& out, std::ostream& err);

// Without `out_path` the report goes to `out`.
int cmd_decorate(const std::filesystem::path& graph, const std::filesystem::path& impl_config,
                 const std::optional<std::filesystem::path>& out_path, Format format,
                 std::ostream& out, std::ostream& err);

struct ScheduleArgs {
  std::filesystem::path graph;
  std::filesystem::path impl_config;
  std::filesystem::path platform;
  std::optional<std::int64_t> deadline;
  std::optional<std::filesystem::path> out_path;
  std::optional<Format> format;  // unset with --out: JSON plus a sibling .csv
  bool double_buffer = true;
  bool fuse = true;
};

int cmd_schedule(const ScheduleArgs& args, std::ostream& out, std::ostream& err);

struct SweepArgs {
  std::filesystem::path spec;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> graph;
  std::optional<std::filesystem::path> platform;
  std::optional<std::int64_t> deadline;
  std::vector<std::string> objectives;  // empty: latency, memory, and accuracy if every variant has one
  unsigned threads = 0;
};

// Writes sweep.csv, sweep.json and pareto.json into `out_dir`.
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qscope::cli

#endif  // QSCOPE_TOOLS_CLI_HPP_

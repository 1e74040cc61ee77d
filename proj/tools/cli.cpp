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

#include "cli.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "CLI11.hpp"
#include "qscope/cost_model.hpp"
#include "qscope/error.hpp"
#include "qscope/graph.hpp"
#include "qscope/impl_config.hpp"
#include "qscope/platform.hpp"
#include "qscope/scheduler.hpp"
#include "qscope/sweep.hpp"

namespace qscope::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kSyntax:
    case ErrorCode::kSchema:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

fs::path temp_name(const fs::path& target) {
  return target.string() + ".tmp" + std::to_string(::getpid());
}

// Stages every file next to its target and renames them only once all were
// written, so a failure leaves no partial output.
void write_all(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> staged;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [target, content] : files) {
    auto tmp = temp_name(target);
    staged.push_back(tmp);
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    o << content;
    o.close();
    if (!o) {
      cleanup();
      throw Error(ErrorCode::kIo, "cannot write file", target.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(staged[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw Error(ErrorCode::kIo, "cannot write file: " + ec.message(), files[i].first.string());
    }
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

fs::path sibling_csv(const fs::path& p) {
  fs::path csv = p;
  csv.replace_extension(".csv");
  if (csv == p) csv += ".csv";
  return csv;
}

DecoratedGraph load_decorated(const fs::path& graph, const fs::path& impl_config) {
  const Graph g = parse_graph(read_file(graph));
  const ImplConfig cfg = parse_impl_config(read_file(impl_config));
  return decorate(g, bind_config(g, cfg));
}

}  // namespace

int cmd_validate(const fs::path& graph, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Graph g = decode_graph(read_file(graph));
    const auto diags = validate_graph(g);
    for (const auto& d : diags) {
      err << to_string(d.kind) << " [" << d.subject << "]: " << d.message << '\n';
    }
    if (!diags.empty()) return kExitDomain;
    out << "ok: " << g.nodes.size() << " nodes, " << g.edges.size() << " edges\n";
    return kExitOk;
  });
}

int cmd_decorate(const fs::path& graph, const fs::path& impl_config,
                 const std::optional<fs::path>& out_path, Format format, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const auto dg = load_decorated(graph, impl_config);
    const auto text = format == Format::kCsv ? decorated_to_csv(dg) : decorated_to_json(dg);
    if (out_path) {
      write_all({{*out_path, text}});
    } else {
      out << text;
    }
    return kExitOk;
  });
}

int cmd_schedule(const ScheduleArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto dg = load_decorated(args.graph, args.impl_config);
    const auto platform = parse_platform(read_file(args.platform));
    std::optional<Deadline> deadline;
    if (args.deadline) deadline = Deadline{*args.deadline};
    const Schedule s =
        refine_and_schedule(dg, platform, deadline, {args.double_buffer, args.fuse});
    const auto csv = report_to_csv(s.report);
    if (!args.out_path) {
      out << (args.format == Format::kCsv ? csv : schedule_to_json(s));
    } else if (args.format == Format::kCsv) {
      write_all({{*args.out_path, csv}});
    } else if (args.format == Format::kJson) {
      write_all({{*args.out_path, schedule_to_json(s)}});
    } else {
      write_all({{*args.out_path, schedule_to_json(s)}, {sibling_csv(*args.out_path), csv}});
    }
    if (s.report.feasible && !*s.report.feasible) {
      err << "deadline missed by " << -*s.report.slack_cycles << " cycles\n";
    }
    return kExitOk;
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SweepOverrides ov{args.graph, args.platform, args.deadline};
    const SweepSpec spec = load_sweep_spec(args.spec, ov);

    std::set<Objective> objectives;
    for (const auto& name : args.objectives) {
      auto o = parse_objective(name);
      if (!o) throw Error(ErrorCode::kSchema, "unknown objective '" + name + "'");
      objectives.insert(*o);
    }
    if (args.objectives.empty()) {
      objectives = {Objective::kLatency, Objective::kMemory};
      bool all_acc = true;
      for (const auto& v : spec.variants) all_acc = all_acc && v.accuracy.has_value();
      if (all_acc) objectives.insert(Objective::kAccuracy);
    }

    const auto rows = run_sweep(spec, {args.threads});
    const auto front = pareto_filter(rows, objectives);
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create directory", args.out_dir.string());
    write_all({{args.out_dir / "sweep.csv", rows_to_csv(rows)},
               {args.out_dir / "sweep.json", rows_to_json(rows)},
               {args.out_dir / "pareto.json", rows_to_json(front)}});
    std::size_t ok = 0;
    for (const auto& r : rows) ok += r.schedulable ? 1 : 0;
    out << rows.size() << " design points, " << ok << " schedulable, " << front.size()
        << " on the Pareto front\n";
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Static latency and memory analysis of quantized networks", "qscope"};
  app.require_subcommand(1);

  const std::map<std::string, Format> formats{{"json", Format::kJson}, {"csv", Format::kCsv}};

  std::string graph;
  auto* validate = app.add_subcommand("validate", "Check a graph file");
  validate->add_option("graph,--graph", graph, "Graph JSON")->required();

  std::string impl_config, out_path;
  Format dec_format = Format::kJson;
  auto* dec = app.add_subcommand("decorate", "Per-node cost and memory report");
  dec->add_option("--graph", graph, "Graph JSON")->required();
  dec->add_option("--impl-config", impl_config, "Implementation config (YAML)")->required();
  dec->add_option("--out", out_path, "Output file (default: stdout)");
  dec->add_option("--format", dec_format, "json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
      ->option_text("json|csv");

  ScheduleArgs sched;
  std::string platform;
  std::int64_t deadline = 0;
  Format sched_format = Format::kJson;
  bool no_db = false, no_fuse = false;
  auto* sch = app.add_subcommand("schedule", "Tile, schedule and bound the latency");
  sch->add_option("--graph", graph, "Graph JSON")->required();
  sch->add_option("--impl-config", impl_config, "Implementation config (YAML)")->required();
  sch->add_option("--platform", platform, "Platform JSON")->required();
  auto* sch_deadline =
      sch->add_option("--deadline", deadline, "Deadline in cycles")->check(CLI::PositiveNumber);
  sch->add_option("--out", out_path, "Output file; JSON plus a sibling .csv unless --format");
  auto* sch_format = sch->add_option("--format", sched_format, "json or csv")
                         ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
      ->option_text("json|csv");
  sch->add_flag("--no-double-buffer", no_db, "Single-buffer every layer");
  sch->add_flag("--no-fuse", no_fuse, "Schedule Act and Quant nodes as separate layers");

  SweepArgs sw;
  std::string spec_path, out_dir;
  std::vector<std::string> objectives;
  unsigned threads = 0;
  auto* swp = app.add_subcommand("sweep", "Grid search over cores, L2 size and configs");
  swp->add_option("spec", spec_path, "Sweep JSON")->required();
  swp->add_option("--out", out_dir, "Output directory")->required();
  auto* sw_graph = swp->add_option("--graph", graph, "Override the graph");
  auto* sw_platform = swp->add_option("--platform", platform, "Override the base platform");
  auto* sw_deadline =
      swp->add_option("--deadline", deadline, "Deadline in cycles")->check(CLI::PositiveNumber);
  swp->add_option("--objectives", objectives, "latency, memory, accuracy")->delimiter(',');
  swp->add_option("--threads", threads, "Worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (validate->parsed()) return cmd_validate(graph, out, err);
  if (dec->parsed()) {
    std::optional<fs::path> o;
    if (!out_path.empty()) o = out_path;
    return cmd_decorate(graph, impl_config, o, dec_format, out, err);
  }
  if (sch->parsed()) {
    sched.graph = graph;
    sched.impl_config = impl_config;
    sched.platform = platform;
    if (sch_deadline->count()) sched.deadline = deadline;
    if (!out_path.empty()) sched.out_path = out_path;
    if (sch_format->count()) sched.format = sched_format;
    sched.double_buffer = !no_db;
    sched.fuse = !no_fuse;
    return cmd_schedule(sched, out, err);
  }
  sw.spec = spec_path;
  sw.out_dir = out_dir;
  if (sw_graph->count()) sw.graph = graph;
  if (sw_platform->count()) sw.platform = platform;
  if (sw_deadline->count()) sw.deadline = deadline;
  sw.objectives = objectives;
  sw.threads = threads;
  return cmd_sweep(sw, out, err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"qscope"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qscope::cli

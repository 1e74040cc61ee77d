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

#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qscope/cost_model.hpp"
#include "qscope/graph.hpp"
#include "qscope/impl_config.hpp"
#include "qscope/platform.hpp"
#include "qscope/quant.hpp"
#include "qscope/scheduler.hpp"
#include "qscope/sweep.hpp"

namespace {

const std::filesystem::path kFixtures = QSCOPE_FIXTURE_DIR;

std::string slurp(const std::string& name) {
  std::ifstream in(kFixtures / name, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct MobileNet {
  qscope::Graph graph = qscope::parse_graph(slurp("mobilenet_v1_32.json"));
  qscope::ImplConfig config = qscope::parse_impl_config(slurp("case2.yaml"));
  qscope::PlatformSpec platform = qscope::parse_platform(slurp("platform_8core.json"));
};

const MobileNet& mobilenet() {
  static const MobileNet m;
  return m;
}

void BM_ParseGraph(benchmark::State& state) {
  const std::string text = slurp("mobilenet_v1_32.json");
  for (auto _ : state) benchmark::DoNotOptimize(qscope::parse_graph(text));
}
BENCHMARK(BM_ParseGraph);

void BM_Decorate(benchmark::State& state) {
  const auto& m = mobilenet();
  const auto bound = qscope::bind_config(m.graph, m.config);
  for (auto _ : state) benchmark::DoNotOptimize(qscope::decorate(m.graph, bound));
}
BENCHMARK(BM_Decorate);

void BM_Schedule(benchmark::State& state) {
  const auto& m = mobilenet();
  const auto dg = qscope::decorate(m.graph, qscope::bind_config(m.graph, m.config));
  auto p = m.platform;
  p.num_cores = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qscope::refine_and_schedule(dg, p));
}
BENCHMARK(BM_Schedule)->Arg(2)->Arg(8);

// Threshold table for a wide accumulator: 2^8 - 1 entries searched per value.
void BM_ThresholdTable(benchmark::State& state) {
  const qscope::AccumulatorDomain acc{16, true, 1.0 / 64};
  const qscope::UniformQuantizer q{1.0, 0, 8, true, qscope::RoundingMode::kHalfUp};
  for (auto _ : state) benchmark::DoNotOptimize(qscope::thresholds_from_uniform(acc, q));
}
BENCHMARK(BM_ThresholdTable);

void BM_Sweep(benchmark::State& state) {
  const auto spec = qscope::load_sweep_spec(kFixtures / "sweep_grid.json");
  qscope::SweepOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qscope::run_sweep(spec, opts));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another
// compiler build, so main lives here.
BENCHMARK_MAIN();

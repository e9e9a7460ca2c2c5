// Copyright 2026 The spq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "common.hpp"
#include "spq/milp.hpp"
#include "spq/saa.hpp"
#include "spq/vg.hpp"

namespace {

using namespace spq;

// One scenario-based MILP of the portfolio query: N tuples, M scenarios.
void BM_SolveSaa(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  bench::Input in = bench::workload_input(WorkloadFamily::kPortfolio, n);
  ScenarioSet scen = generate_scenarios(in.relation, m, 11);
  MeanColumns means = mean_columns(in.relation, 1000, 3);
  SaaFormulation f = formulate_saa(in.query, in.relation, scen, 11, means);
  std::size_t nodes = 0;
  for (auto _ : state) {
    MilpSolution s = solve(f.problem);
    nodes = s.nodes;
    benchmark::DoNotOptimize(s.objective);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
  state.counters["nonzeros"] = static_cast<double>(f.problem.nonzeros());
}
BENCHMARK(BM_SolveSaa)->Args({20, 5})->Args({20, 10})->Args({40, 10})
    ->Unit(benchmark::kMillisecond);

void BM_Linearize(benchmark::State& state) {
  bench::Input in = bench::workload_input(WorkloadFamily::kPortfolio, 100);
  ScenarioSet scen = generate_scenarios(in.relation, 50, 11);
  MeanColumns means = mean_columns(in.relation, 1000, 3);
  SaaFormulation f = formulate_saa(in.query, in.relation, scen, 11, means);
  for (auto _ : state) benchmark::DoNotOptimize(linearize(f.problem));
}
BENCHMARK(BM_Linearize);

}  // namespace

BENCHMARK_MAIN();

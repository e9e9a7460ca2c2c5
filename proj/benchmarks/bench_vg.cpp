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
#include "spq/vg.hpp"

namespace {

using namespace spq;

void BM_GenerateGbm(benchmark::State& state) {
  bench::Input in = bench::workload_input(WorkloadFamily::kPortfolio, 200);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_scenarios(in.relation, m, 5));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m * 200));
}
BENCHMARK(BM_GenerateGbm)->Arg(10)->Arg(100);

void BM_GenerateNormal(benchmark::State& state) {
  bench::Input in = bench::workload_input(WorkloadFamily::kGalaxy, 200);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_scenarios(in.relation, m, 5));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m * 200));
}
BENCHMARK(BM_GenerateNormal)->Arg(10)->Arg(100);

void BM_MeanColumns(benchmark::State& state) {
  bench::Input in = bench::workload_input(WorkloadFamily::kPortfolio, 200);
  for (auto _ : state) benchmark::DoNotOptimize(mean_columns(in.relation, 1000, 3));
}
BENCHMARK(BM_MeanColumns)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

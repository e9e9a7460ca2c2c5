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
#include "spq/validate.hpp"
#include "spq/vg.hpp"

namespace {

using namespace spq;

void BM_Validate(benchmark::State& state) {
  bench::Input in = bench::workload_input(WorkloadFamily::kPortfolio, 200);
  MeanColumns means = mean_columns(in.relation, 1000, 3);
  const auto m_hat = static_cast<std::size_t>(state.range(0));
  const auto jobs = static_cast<std::size_t>(state.range(1));
  Package x{{1, 2}, {5, 1}, {17, 3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate(x, in.query, in.relation, means, m_hat, 9, jobs));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m_hat));
}
BENCHMARK(BM_Validate)->Args({1000, 1})->Args({10000, 1})->Args({10000, 2})
    ->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();

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


#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "common.hpp"
#include "spq/summary.hpp"
#include "spq/vg.hpp"

namespace {

using namespace spq;

void BM_AlphaSummary(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> val(0.0, 1.0);
  std::vector<std::vector<double>> g(m, std::vector<double>(n));
  for (auto& row : g) {
    for (double& v : row) v = val(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(build_alpha_summary(g, Cmp::kGe));
}
BENCHMARK(BM_AlphaSummary)->Args({200, 10})->Args({200, 100})->Args({2000, 100});

void BM_FormulateCsa(benchmark::State& state) {
  bench::Input in = bench::workload_input(WorkloadFamily::kPortfolio, 200);
  const auto m = static_cast<std::size_t>(state.range(0));
  ScenarioSet scen = generate_scenarios(in.relation, m, 11);
  MeanColumns means = mean_columns(in.relation, 1000, 3);
  CsaInput csa;
  csa.query = &in.query;
  csa.relation = &in.relation;
  csa.means = &means;
  csa.m = m;
  csa.z = 1;
  csa.scenario_seed = 11;
  csa.partition_seed = 12;
  csa.scenarios = &scen;
  std::vector<double> alpha(in.query.constraints.size(), 0.0);
  for (std::size_t k : in.query.probabilistic_indices()) alpha[k] = 0.9;
  for (auto _ : state) benchmark::DoNotOptimize(formulate_csa(csa, alpha, Package{}));
}
BENCHMARK(BM_FormulateCsa)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();

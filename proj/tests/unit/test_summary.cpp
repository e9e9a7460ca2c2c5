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


#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "instances.hpp"
#include "spq/errors.hpp"
#include "spq/milp.hpp"
#include "spq/rng.hpp"
#include "spq/summary.hpp"

using namespace spq;
using spq::testing::example_gains;

TEST_CASE("partition sizes") {
  auto check_cover = [](const Partitioning& p, std::size_t m) {
    std::vector<std::size_t> all;
    for (const auto& b : p.blocks) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(m);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(all == expect);
  };
  Partitioning p = partition_scenarios(6, 3, 1);
  REQUIRE(p.blocks.size() == 3);
  for (const auto& b : p.blocks) CHECK(b.size() == 2);
  check_cover(p, 6);
  Partitioning singles = partition_scenarios(5, 5, 2);
  for (const auto& b : singles.blocks) CHECK(b.size() == 1);
  check_cover(singles, 5);
  Partitioning one = partition_scenarios(7, 1, 3);
  REQUIRE(one.blocks.size() == 1);
  CHECK(one.blocks[0].size() == 7);
  Partitioning uneven = partition_scenarios(7, 3, 4);
  for (const auto& b : uneven.blocks) CHECK((b.size() == 2 || b.size() == 3));
  check_cover(uneven, 7);
  CHECK(partition_scenarios(9, 4, 5).blocks == partition_scenarios(9, 4, 5).blocks);
  CHECK_THROWS_AS(partition_scenarios(3, 4, 1), ArgumentError);
}

TEST_CASE("scenario selection orders by the previous solution") {
  const auto g = example_gains();
  ColumnFn column = [&](std::size_t j) { return g[j]; };
  std::vector<std::size_t> block = {0, 2};
  Package prev{{3, 2}, {6, 1}};
  CHECK(select_gz(block, 1, prev, column, Cmp::kGe) == std::vector<std::size_t>{2});
  CHECK(select_gz(block, 1, Package{}, column, Cmp::kGe) ==
        std::vector<std::size_t>{0});
  auto both = select_gz(block, 2, prev, column, Cmp::kGe);
  std::sort(both.begin(), both.end());
  CHECK(both == block);
}

TEST_CASE("alpha summary of two example scenarios") {
  const auto g = example_gains();
  Summary s = build_alpha_summary({g[0], g[2]}, Cmp::kGe);
  CHECK(s.values == std::vector<double>{0.01, 0.02, -0.2, -0.3, 0.1, -0.7});
  Summary kept = build_alpha_summary({g[0], g[2]}, Cmp::kGe, {3});
  CHECK(kept.values == std::vector<double>{0.01, 0.02, -0.1, -0.3, 0.1, -0.7});
  Summary single = build_alpha_summary({g[1]}, Cmp::kGe);
  CHECK(single.values == g[1]);
  Summary upper = build_alpha_summary({g[0], g[2]}, Cmp::kLe);
  CHECK(upper.values == std::vector<double>{0.1, 0.05, -0.1, 0.2, 0.2, 0.3});
}

TEST_CASE("alpha grid helpers") {
  CHECK(alpha_level(0.0, 2, 10) == 0);
  CHECK(alpha_level(0.4, 2, 10) == 2);
  CHECK(alpha_level(1.0, 3, 10) == 4);
  CHECK_THROWS_AS(alpha_level(0.3, 2, 10), ArgumentError);
  CHECK(alpha_from_level(2, 2, 10) == doctest::Approx(0.4));
  CHECK(summary_size(0.0, 1, 10, 10) == 0);
  CHECK(summary_size(0.3, 1, 10, 10) == 3);
  CHECK(summary_size(1.0, 10, 10, 1) == 1);
}

TEST_CASE("summary satisfaction implies scenario satisfaction") {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> val(0.0, 1.0);
  std::uniform_int_distribution<int> ns(1, 6), ms(1, 8), cnt(0, 3), coin(0, 1);
  int implied = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(ns(rng));
    const auto m = static_cast<std::size_t>(ms(rng));
    std::vector<std::vector<double>> pool(m, std::vector<double>(n));
    for (auto& r : pool) {
      for (double& v : r) v = val(rng);
    }
    std::uniform_int_distribution<std::size_t> lvl(1, m);
    const std::size_t take = lvl(rng);
    std::vector<std::vector<double>> g(pool.begin(), pool.begin() + take);
    Package x;
    for (TupleId i = 1; i <= n; ++i) x.set(i, cnt(rng));
    const Cmp dir = coin(rng) ? Cmp::kGe : Cmp::kLe;
    const double v = val(rng);
    Summary s = build_alpha_summary(g, dir);
    if (!holds(inner_sum(x, s.values), dir, v)) continue;
    ++implied;
    for (const auto& scen : g) CHECK(holds(inner_sum(x, scen), dir, v));
  }
  CHECK(implied > 50);
}

TEST_CASE("keep-set summary dominates every scenario on its support") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> val(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5, m = 4;
    std::vector<std::vector<double>> g(m, std::vector<double>(n));
    for (auto& r : g) {
      for (double& v : r) v = val(rng);
    }
    std::set<TupleId> keep = {1, 3, 4};
    Package x{{1, 1 + trial % 3}, {3, 2}, {4, 1}};
    Summary s = build_alpha_summary(g, Cmp::kGe, keep);
    double best = -1e300;
    for (const auto& scen : g) best = std::max(best, inner_sum(x, scen));
    CHECK(inner_sum(x, s.values) >= best - 1e-12);
  }
}

namespace {

CsaInput csa_input(const QueryIR& q, const Relation& rel, const MeanColumns& means,
                   const ScenarioSet& scen, std::size_t z) {
  CsaInput in;
  in.query = &q;
  in.relation = &rel;
  in.means = &means;
  in.m = scen.m;
  in.z = z;
  in.scenario_seed = 11;
  in.partition_seed = 12;
  in.scenarios = &scen;
  return in;
}

}  // namespace

TEST_CASE("Z = M reproduces the scenario formulation") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = spq::testing::random_instance(rng, 6, 3);
    QueryIR q = canonicalize(compile_query(inst.query, inst.relation), inst.relation);
    const std::size_t m = 2 + trial % 4;
    ScenarioSet scen = generate_scenarios(inst.relation, m, 11);
    MeanColumns means = mean_columns(inst.relation, 500, 3);
    SaaFormulation saa = formulate_saa(q, inst.relation, scen, 11, means);
    CsaInput in = csa_input(q, inst.relation, means, scen, m);
    std::vector<double> alpha(q.constraints.size(), 0.0);
    for (std::size_t k : q.probabilistic_indices()) alpha[k] = 1.0;
    CsaFormulation csa = formulate_csa(in, alpha, Package{});
    CHECK(spq::testing::canonical_rows(csa.saa) == spq::testing::canonical_rows(saa));
  }
}

TEST_CASE("alpha zero drops every probabilistic row") {
  Relation rel = spq::testing::stock_relation();
  QueryIR q = canonicalize(compile_query(spq::testing::kPortfolioQuery, rel), rel);
  ScenarioSet scen = spq::testing::scenario_set("Gain", example_gains());
  MeanColumns means{{"Gain", std::vector<double>(6, 0.01)}};
  CsaInput in = csa_input(q, rel, means, scen, 1);
  CsaFormulation csa = formulate_csa(in, std::vector<double>(2, 0.0), Package{});
  CHECK(csa.saa.problem.indicators.empty());
  CHECK(csa.summaries.empty());
  SaaFormulation base = formulate_base(q, rel, scen, 11, means);
  CHECK(spq::testing::canonical_rows(csa.saa) == spq::testing::canonical_rows(base));
}

TEST_CASE("single summary must be satisfied") {
  Relation rel = spq::testing::stock_relation();
  QueryIR q = canonicalize(compile_query(spq::testing::kPortfolioQuery, rel), rel);
  ScenarioSet scen = spq::testing::scenario_set("Gain", example_gains());
  MeanColumns means{{"Gain", std::vector<double>(6, 0.01)}};
  CsaInput in = csa_input(q, rel, means, scen, 1);
  CsaFormulation csa = formulate_csa(in, {0.0, 1.0}, Package{});
  REQUIRE(csa.saa.problem.indicators.size() == 1);
  CHECK(csa.saa.problem.rows[csa.saa.counting_row.at(1)].rhs == 1.0);
  REQUIRE(csa.summaries.at(1).size() == 1);
  std::vector<double> expect(6);
  const auto g = example_gains();
  for (std::size_t i = 0; i < 6; ++i) {
    expect[i] = std::min({g[0][i], g[1][i], g[2][i]});
  }
  CHECK(csa.summaries.at(1)[0].values == expect);
}

TEST_CASE("summary strategies agree") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = spq::testing::random_instance(rng, 8, 4);
    QueryIR q = canonicalize(compile_query(inst.query, inst.relation), inst.relation);
    ScenarioSet scen = generate_scenarios(inst.relation, 12, 11);
    MeanColumns means = mean_columns(inst.relation, 200, 3);
    CsaInput in = csa_input(q, inst.relation, means, scen, 3);
    Package prev{{1, 1}, {2, 2}};
    std::vector<Summary> ref = build_summaries(in, 1, 0.5, prev, {});
    for (auto strat : {SummaryStrategy::kTupleWise, SummaryStrategy::kScenarioWise}) {
      CsaInput alt = in;
      alt.strategy = strat;
      alt.scenarios = nullptr;
      std::vector<Summary> got = build_summaries(alt, 1, 0.5, prev, {});
      REQUIRE(got.size() == ref.size());
      for (std::size_t b = 0; b < ref.size(); ++b) {
        CHECK(got[b].values == ref[b].values);
        CHECK(got[b].scenarios == ref[b].scenarios);
      }
    }
  }
  CHECK(strategy_from_name("tuple_wise") == SummaryStrategy::kTupleWise);
  CHECK_THROWS_AS(strategy_from_name("bogus"), ArgumentError);
}

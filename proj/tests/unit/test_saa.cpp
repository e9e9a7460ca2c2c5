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

#include "doctest.h"
#include "fixtures.hpp"
#include "spq/errors.hpp"
#include "spq/milp.hpp"
#include "spq/saa.hpp"
#include "spq/spaql.hpp"

using namespace spq;
using spq::testing::scenario_set;

namespace {

Relation chance_relation(std::size_t n) {
  Relation rel("R", n);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<double>(i + 1);
  rel.add_deterministic("c", c);
  rel.add_stochastic("a", spq::testing::normal_spec(std::vector<double>(n, 0.0),
                                                    std::vector<double>(n, 1.0)));
  return rel;
}

QueryIR chance_query(const Relation& rel, const std::string& p) {
  return canonicalize(
      compile_query("SELECT PACKAGE(*) FROM R SUCH THAT SUM(a) >= 1 WITH "
                    "PROBABILITY >= " + p + " MINIMIZE SUM(c)",
                    rel),
      rel);
}

}  // namespace

TEST_CASE("counting row uses the exact ceiling") {
  Relation rel = chance_relation(3);
  std::vector<std::vector<double>> rows(10, {1.0, 2.0, 3.0});
  SaaFormulation f = formulate_saa(chance_query(rel, "0.9"), rel,
                                   scenario_set("a", rows), 1, {});
  REQUIRE(f.counting_row.size() == 1);
  CHECK(f.problem.rows[f.counting_row.at(0)].rhs == 9.0);
}

TEST_CASE("structure of a two-scenario formulation") {
  Relation rel = chance_relation(3);
  std::vector<std::vector<double>> rows = {{1.0, 2.0, 3.0}, {-1.0, 0.5, 2.0}};
  SaaFormulation f = formulate_saa(chance_query(rel, "0.5"), rel,
                                   scenario_set("a", rows), 1, {});
  std::size_t xs = 0, ys = 0;
  for (const MilpVar& v : f.problem.vars) {
    xs += v.role == VarRole::kDecision;
    ys += v.role == VarRole::kIndicator;
  }
  CHECK(xs == 3);
  CHECK(ys == 2);
  CHECK(f.problem.indicators.size() == 2);
  CHECK(f.counting_row.size() == 1);
  CHECK(coefficient_count(f) == 10);

  std::vector<std::vector<double>> doubled = rows;
  doubled.insert(doubled.end(), rows.begin(), rows.end());
  SaaFormulation g = formulate_saa(chance_query(rel, "0.5"), rel,
                                   scenario_set("a", doubled), 1, {});
  CHECK(coefficient_count(g) == 20);
}

TEST_CASE("M = 0 is rejected") {
  Relation rel = chance_relation(3);
  ScenarioSet empty;
  empty.attrs = {"a"};
  empty.n = 3;
  empty.data.emplace_back();
  CHECK_THROWS_AS(formulate_saa(chance_query(rel, "0.5"), rel, empty, 1, {}),
                  ArgumentError);
}

TEST_CASE("portfolio query rows test each scenario") {
  Relation rel = spq::testing::stock_relation();
  QueryIR q = canonicalize(compile_query(spq::testing::kPortfolioQuery, rel), rel);
  const auto gains = spq::testing::example_gains();
  MeanColumns means{{"Gain", std::vector<double>(6, 0.0)}};
  SaaFormulation f = formulate_saa(q, rel, scenario_set("Gain", gains), 1, means);
  REQUIRE(f.problem.indicators.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    const IndicatorRow& ind = f.problem.indicators[j];
    CHECK(ind.cmp == Cmp::kGe);
    CHECK(ind.rhs == -10.0);
    std::vector<double> coefs(6, 0.0);
    for (auto [v, a] : ind.coefs) {
      for (std::size_t i = 0; i < 6; ++i) {
        if (f.x_var[i] == v) coefs[i] = a;
      }
    }
    CHECK(coefs == gains[j]);
  }
  CHECK(f.problem.rows[f.counting_row.at(1)].rhs == 3.0);
}

TEST_CASE("REPEAT 0 bounds every multiplicity by one") {
  Relation rel = chance_relation(4);
  QueryIR q = canonicalize(
      compile_query("SELECT PACKAGE(*) FROM R REPEAT 0 SUCH THAT SUM(c) <= 6 "
                    "MAXIMIZE SUM(c)",
                    rel),
      rel);
  SaaFormulation f = formulate_saa(q, rel, scenario_set("a", {{0, 0, 0, 0}}), 1, {});
  for (int v : f.x_var) CHECK(f.problem.vars[v].hi == 1.0);
  MilpSolution s = solve(f.problem);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.objective == 6.0);
}

TEST_CASE("solutions satisfy the required number of scenarios") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> val(0.0, 2.0);
  std::uniform_int_distribution<int> ns(2, 5), ms(2, 8);
  const char* probs[] = {"0.5", "0.6", "0.75", "0.9"};
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<std::size_t>(ns(rng));
    const auto m = static_cast<std::size_t>(ms(rng));
    Relation rel = chance_relation(n);
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    for (auto& r : rows) {
      for (double& v : r) v = std::round(val(rng) * 4) / 4;
    }
    const std::string p = probs[trial % 4];
    QueryIR q = canonicalize(
        compile_query("SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) <= 4 AND "
                      "SUM(a) >= 1 WITH PROBABILITY >= " + p + " MINIMIZE SUM(c)",
                      rel),
        rel);
    SaaFormulation f = formulate_saa(q, rel, scenario_set("a", rows), 1, {});
    MilpSolution s = solve(f.problem);
    if (s.status != SolveStatus::kOptimal) continue;
    ++solved;
    Package x = package_from_solution(f, s.values);
    std::int64_t satisfied = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const bool direct = inner_sum(x, rows[j]) >= 1.0 - 1e-9;
      satisfied += direct;
      const int y = f.indicator.at({1, j});
      if (s.values[y] > 0.5) CHECK(direct);
    }
    CHECK(satisfied >= Decimal::parse(p).ceil_times(static_cast<std::int64_t>(m)));
  }
  CHECK(solved > 20);
}

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


#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "milp_oracle.hpp"
#include "spq/errors.hpp"
#include "spq/milp.hpp"

using namespace spq;

namespace {

MilpVar int_var(const std::string& name, double lo, double hi) {
  MilpVar v;
  v.name = name;
  v.lo = lo;
  v.hi = hi;
  return v;
}

MilpProblem knapsack() {
  MilpProblem p;
  p.name = "knapsack";
  p.sense = Sense::kMaximize;
  p.add_var(int_var("x1", 0, 1), 3);
  p.add_var(int_var("x2", 0, 1), 2);
  p.add_row({"cap", {{0, 1.0}, {1, 1.0}}, Cmp::kLe, 1.0});
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("big-M from the variable box") {
  MilpProblem p;
  for (int j = 0; j < 3; ++j) p.add_var(int_var("x" + std::to_string(j + 1), 0, 5));
  p.add_row({"box", {{0, 1.0}, {1, 1.0}, {2, 1.0}}, Cmp::kLe, 5.0});
  MilpVar y = int_var("y", 0, 1);
  y.role = VarRole::kIndicator;
  int yi = p.add_var(y);
  IndicatorRow ind{"ind", yi, {{0, 0.2}, {1, 0.7}, {2, 1.0}}, Cmp::kGe, 3.0};
  CHECK(big_m(p, ind) == doctest::Approx(3.0));
  ind.rhs = 0.0;
  CHECK(big_m(p, ind) == 0.0);
  p.indicators.push_back(ind);
  MilpProblem lin = linearize(p);
  CHECK(lin.indicators.empty());
  CHECK(lin.rows.back().rhs == 0.0);
  CHECK(lin.rows.back().coefs.size() == 3);
}

TEST_CASE("linearized row reduces to the inner row when y = 1") {
  MilpProblem p;
  p.add_var(int_var("x1", 0, 3));
  p.add_var(int_var("x2", 0, 3));
  int yi = p.add_var(int_var("y", 0, 1));
  p.indicators.push_back({"ind", yi, {{0, 1.0}, {1, -2.0}}, Cmp::kGe, 1.0});
  MilpProblem lin = linearize(p);
  const LinearRow& r = lin.rows.back();
  double ycoef = 0;
  for (auto [j, a] : r.coefs) {
    if (j == yi) ycoef = a;
  }
  // Substituting y = 1 moves the slack term to the right-hand side.
  CHECK(r.rhs - ycoef == doctest::Approx(1.0));
}

TEST_CASE("small solves") {
  MilpProblem single;
  single.sense = Sense::kMaximize;
  single.add_var(int_var("x", 0, 3), 1.0);
  MilpSolution s = solve(single);
  CHECK(s.status == SolveStatus::kOptimal);
  CHECK(s.values[0] == 3.0);

  MilpSolution k = solve(knapsack());
  CHECK(k.status == SolveStatus::kOptimal);
  CHECK(k.objective == 3.0);
  CHECK(k.values == std::vector<double>{1.0, 0.0});

  MilpProblem bad;
  bad.add_var(int_var("x1", 0, 1));
  bad.add_var(int_var("x2", 0, 1));
  bad.add_row({"lo", {{0, 1.0}, {1, 1.0}}, Cmp::kGe, 2.0});
  bad.add_row({"hi", {{0, 1.0}, {1, 1.0}}, Cmp::kLe, 0.0});
  CHECK(solve(bad).status == SolveStatus::kInfeasible);
}

TEST_CASE("continuous variables and equality rows") {
  MilpProblem p;
  p.sense = Sense::kMinimize;
  MilpVar c = int_var("c", 0, 10);
  c.integer = false;
  int ci = p.add_var(c, 1.0);
  int xi = p.add_var(int_var("x", 0, 4), 0.0);
  p.add_row({"eq", {{xi, 1.0}}, Cmp::kEq, 2.0});
  p.add_row({"link", {{ci, 2.0}, {xi, -1.0}}, Cmp::kGe, 0.0});
  MilpSolution s = solve(p);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.values[xi] == 2.0);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("unbounded integer variable is rejected") {
  MilpProblem p;
  p.sense = Sense::kMaximize;
  p.add_var(int_var("x", 0, kInf), 1.0);
  CHECK_THROWS_AS(solve(p), UnboundedError);
}

TEST_CASE("node limit keeps the incumbent") {
  std::mt19937_64 rng(5);
  MilpProblem p;
  p.sense = Sense::kMaximize;
  SparseRow cap;
  for (int j = 0; j < 12; ++j) {
    p.add_var(int_var("x" + std::to_string(j), 0, 1), 3 + j % 5);
    cap.emplace_back(j, 2 + (j * 7) % 5);
  }
  p.add_row({"cap", cap, Cmp::kLe, 13.5});
  SolverOptions opts;
  opts.node_limit = 2;
  MilpSolution s = solve(p, opts);
  if (s.status == SolveStatus::kTimeLimitBest) CHECK(s.has_incumbent);
  if (s.has_incumbent) CHECK(p.feasible(s.values));
  CHECK(solve(p).status == SolveStatus::kOptimal);
}

TEST_CASE("LP export") {
  MilpProblem empty;
  std::string text = export_lp(empty);
  CHECK(text.rfind("\\ Problem name: spq\n", 0) == 0);
  CHECK(text.find("End\n") != std::string::npos);

  CHECK(export_lp(knapsack()) == slurp(std::string(SPQ_TEST_DATA_DIR) + "/knapsack.lp"));

  MilpProblem p = knapsack();
  std::vector<int> ys;
  LinearRow count{"count", {}, Cmp::kGe, 1.0};
  for (int k = 0; k < 3; ++k) {
    MilpVar y = int_var("y" + std::to_string(k + 1), 0, 1);
    y.role = VarRole::kIndicator;
    ys.push_back(p.add_var(y));
    p.indicators.push_back({"s" + std::to_string(k + 1), ys.back(),
                            {{0, 1.0 + k}, {1, -1.0}}, Cmp::kGe, 0.5});
    count.coefs.emplace_back(ys.back(), 1.0);
  }
  p.add_row(count);
  std::string lp = export_lp(p);
  auto binary = lp.find("Binary\n");
  REQUIRE(binary != std::string::npos);
  std::string section = lp.substr(binary);
  for (const char* y : {"y1", "y2", "y3"}) CHECK(section.find(y) != std::string::npos);
}

TEST_CASE("big-M linearization preserves indicator semantics") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    MilpProblem p = spq::testing::random_milp(rng);
    if (p.indicators.empty()) continue;
    std::size_t points = 1;
    for (const auto& v : p.vars) points *= static_cast<std::size_t>(v.hi - v.lo + 1);
    if (points > 4096) continue;
    MilpProblem lin = linearize(p);
    spq::testing::for_each_point(p, [&](const std::vector<double>& x) {
      CHECK(p.feasible(x, 1e-9) == lin.feasible(x, 1e-9));
    });
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("solver matches exhaustive enumeration") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    MilpProblem p = spq::testing::random_milp(rng);
    CAPTURE(trial);
    auto best = spq::testing::enumerate_optimum(p);
    MilpSolution s = solve(p);
    if (!best) {
      CHECK(s.status == SolveStatus::kInfeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::kOptimal);
    CHECK(p.feasible(s.values, 1e-6));
    CHECK(std::round(s.objective) == *best);
  }
}

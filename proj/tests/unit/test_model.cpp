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
#include "spq/model.hpp"
#include "spq/spaql.hpp"

using namespace spq;
using spq::testing::example_gains;
using spq::testing::stock_relation;

TEST_CASE("inner_sum on the example gain scenarios") {
  const auto g = example_gains();
  CHECK(inner_sum(Package{{3, 2}, {6, 1}}, g[0]) == doctest::Approx(-1.1));
  CHECK(inner_sum(Package{}, g[1]) == 0.0);
  CHECK(inner_sum(Package{{1, 1}}, g[0]) == doctest::Approx(0.1));
}

TEST_CASE("inner_sum is additive over disjoint supports") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(-5, 5);
  std::uniform_int_distribution<int> cnt(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values(10);
    for (double& v : values) v = val(rng);
    Package a, b;
    for (TupleId i = 1; i <= 10; ++i) (i % 2 ? a : b).set(i, cnt(rng));
    double lhs = inner_sum(a + b, values);
    double rhs = inner_sum(a, values) + inner_sum(b, values);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("package basics") {
  Package x{{2, 3}, {5, 1}};
  CHECK(x.size() == 4);
  CHECK(x.support() == std::vector<TupleId>{2, 5});
  x.set(2, 0);
  CHECK(x.get(2) == 0);
  CHECK(x.support() == std::vector<TupleId>{5});
  std::vector<std::int64_t> dense = {0, 1, 0, 2};
  CHECK(Package::from_dense(dense) == Package{{2, 1}, {4, 2}});
  CHECK(Package::from_dense(dense).dense(4) == dense);
}

TEST_CASE("linear expressions normalize") {
  LinearExpr e;
  e.terms = {{"b", 2.0}, {"a", 1.0}, {"b", -2.0}, {"c", 0.0}};
  LinearExpr n = e.normalized();
  REQUIRE(n.terms.size() == 1);
  CHECK(n.terms[0].attr == "a");
  CHECK(LinearExpr::count().is_count());
}

TEST_CASE("probability objective adds an epigraph row") {
  Relation rel("R", 3);
  rel.add_deterministic("price", {1, 2, 3});
  rel.add_stochastic("Revenue", spq::testing::normal_spec({1, 2, 3}, {1, 1, 1}));
  QueryIR q = compile_query(
      "SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) BETWEEN 1 AND 10 "
      "MAXIMIZE PROBABILITY OF (SUM(Revenue) >= 1000)",
      rel);
  QueryIR c = canonicalize(q, rel);
  CHECK(c.objective.kind == ObjectiveKind::kProbability);
  CHECK(c.objective.sense == Sense::kMaximize);
  REQUIRE(c.probabilistic_count() == 1);
  const Constraint& epi = c.constraints.back();
  CHECK(epi.epigraph);
  CHECK(epi.cmp == Cmp::kGe);
  CHECK(epi.rhs == 1000.0);
  CHECK_FALSE(epi.prob.has_value());
}

TEST_CASE("minimized probability objective is complemented") {
  Relation rel("R", 2);
  rel.add_stochastic("A", spq::testing::normal_spec({1, 2}, {1, 1}));
  QueryIR c = canonicalize(
      compile_query("SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) <= 3 "
                    "MINIMIZE PROBABILITY OF (SUM(A) <= 2)",
                    rel),
      rel);
  CHECK(c.objective.sense == Sense::kMaximize);
  CHECK(c.objective.complemented);
  CHECK(c.constraints.back().cmp == Cmp::kGe);
}

TEST_CASE("expectation and deterministic objectives keep their form") {
  Relation rel = stock_relation();
  QueryIR q = compile_query(spq::testing::kPortfolioQuery, rel);
  QueryIR c = canonicalize(q, rel);
  CHECK(c.objective.kind == ObjectiveKind::kExpectation);
  CHECK(c.objective.sense == Sense::kMaximize);
  CHECK(c.objective.inner == q.objective.inner.normalized());
  CHECK(c.objective.use_means);

  QueryIR d = canonicalize(
      compile_query("SELECT PACKAGE(*) FROM Stock_Investments SUCH THAT "
                    "COUNT(*) >= 1 MINIMIZE SUM(price)",
                    rel),
      rel);
  CHECK(d.objective.sense == Sense::kMinimize);
  CHECK(d.objective.inner == LinearExpr::attribute("price"));
  CHECK(d.objective.point_mass);
}

TEST_CASE("canonicalize is idempotent") {
  Relation rel = stock_relation();
  const char* queries[] = {
      spq::testing::kPortfolioQuery,
      "SELECT PACKAGE(*) FROM Stock_Investments SUCH THAT COUNT(*) <= 4 AND "
      "SUM(Gain) <= 1 WITH PROBABILITY <= 0.2 MINIMIZE PROBABILITY OF "
      "(SUM(Gain) >= 0.5)",
      "SELECT PACKAGE(*) FROM Stock_Investments REPEAT 0 SUCH THAT "
      "SUM(price) BETWEEN 100 AND 600 MINIMIZE SUM(price)",
  };
  for (const char* text : queries) {
    QueryIR once = canonicalize(compile_query(text, rel), rel);
    QueryIR twice = canonicalize(once, rel);
    CHECK(once == twice);
  }
}

TEST_CASE("deterministic constraint on stochastic attribute is rejected") {
  Relation rel = stock_relation();
  CHECK_THROWS_AS(canonicalize(compile_query(
                                   "SELECT PACKAGE(*) FROM Stock_Investments "
                                   "SUCH THAT SUM(Gain) >= 1",
                                   rel),
                               rel),
                  SemanticsError);
}

namespace {

Objective expectation(Sense sense, const std::string& attr) {
  Objective o;
  o.sense = sense;
  o.kind = ObjectiveKind::kExpectation;
  o.inner = LinearExpr::attribute(attr);
  return o;
}

Constraint chance(const std::string& attr, Cmp cmp, double coef = 1.0) {
  Constraint c;
  c.kind = ConstraintKind::kProbabilistic;
  c.inner = LinearExpr::attribute(attr, coef);
  c.cmp = cmp;
  c.prob = Decimal::parse("0.9");
  return c;
}

}  // namespace

TEST_CASE("interaction classification") {
  CHECK(classify_interaction(expectation(Sense::kMinimize, "A"),
                             chance("A", Cmp::kGe)) == Interaction::kCounteracted);
  CHECK(classify_interaction(expectation(Sense::kMinimize, "A"),
                             chance("A", Cmp::kLe)) == Interaction::kSupported);
  CHECK(classify_interaction(expectation(Sense::kMinimize, "A"),
                             chance("B", Cmp::kLe)) == Interaction::kIndependent);
  CHECK(classify_interaction(expectation(Sense::kMaximize, "Gain"),
                             chance("Gain", Cmp::kGe)) == Interaction::kSupported);
}

TEST_CASE("interaction classification is symmetric under negation") {
  // Maximizing f against (f op v) matches minimizing -f against (-f flip(op) -v).
  for (Cmp op : {Cmp::kLe, Cmp::kGe}) {
    Interaction max_form = classify_interaction(
        expectation(Sense::kMaximize, "A"), chance("A", op));
    Objective neg = expectation(Sense::kMinimize, "A");
    neg.inner = LinearExpr::attribute("A", -1.0);
    Interaction min_form =
        classify_interaction(neg, chance("A", flip(op), -1.0));
    CHECK(max_form == min_form);
  }
}

TEST_CASE("count bounds and deterministic satisfaction") {
  Relation rel = stock_relation();
  QueryIR q = canonicalize(
      compile_query("SELECT PACKAGE(*) FROM Stock_Investments SUCH THAT "
                    "COUNT(*) BETWEEN 2 AND 3 AND SUM(price) <= 500",
                    rel),
      rel);
  auto [lo, hi] = q.count_bounds();
  CHECK(lo == 2);
  REQUIRE(hi.has_value());
  CHECK(*hi == 3);
  std::map<std::string, std::vector<double>> means;
  CHECK(satisfies_deterministic(Package{{3, 2}}, q, rel, means));
  std::string why;
  CHECK_FALSE(satisfies_deterministic(Package{{1, 1}, {3, 1}, {5, 1}}, q, rel, means, &why));
  CHECK_FALSE(why.empty());
  CHECK_FALSE(satisfies_deterministic(Package{{3, 1}}, q, rel, means));
}

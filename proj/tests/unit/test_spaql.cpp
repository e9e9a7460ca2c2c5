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
#include <nlohmann/json.hpp>
#include "spq/errors.hpp"
#include "spq/relation_io.hpp"
#include "spq/spaql.hpp"
#include "spq/workloads.hpp"

using namespace spq;

TEST_CASE("tokenizer classifies symbols and keywords") {
  auto toks = tokenize("select SUM(a) <= -1.5e2;");
  REQUIRE(toks.size() >= 8);
  CHECK(toks[0].kind == TokenKind::kKeyword);
  CHECK(toks[0].text == "SELECT");
  CHECK(toks[1].kind == TokenKind::kKeyword);
  CHECK(toks[3].kind == TokenKind::kIdent);
  CHECK(toks[5].kind == TokenKind::kLe);
  CHECK(toks.back().kind == TokenKind::kEnd);
  CHECK(toks[0].pos.line == 1);
  CHECK(toks[0].pos.column == 1);
}

TEST_CASE("portfolio query parses into the expected tree") {
  Ast a = parse(spq::testing::kPortfolioQuery);
  CHECK(a.alias == "Portfolio");
  CHECK(a.table == "Stock_Investments");
  REQUIRE(a.such_that.size() == 2);
  const auto& budget = a.such_that[0];
  CHECK_FALSE(budget.prob.has_value());
  CHECK(budget.cmp == Cmp::kLe);
  CHECK(budget.rhs == 1000.0);
  REQUIRE(budget.agg.terms.size() == 1);
  CHECK(budget.agg.terms[0].attr == "price");
  const auto& risk = a.such_that[1];
  REQUIRE(risk.prob.has_value());
  CHECK(risk.cmp == Cmp::kGe);
  CHECK(risk.rhs == -10.0);
  CHECK(risk.prob->cmp == Cmp::kGe);
  CHECK(risk.prob->p == Decimal::parse("0.95"));
  REQUIRE(a.objective.has_value());
  CHECK(a.objective->sense == Sense::kMaximize);
  CHECK(a.objective->form == ast::ObjectiveForm::kExpected);
  CHECK(a.objective->agg.terms[0].attr == "Gain");
}

TEST_CASE("probability objective parses") {
  Ast a = parse(
      "SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) BETWEEN 1 AND 10 "
      "MAXIMIZE PROBABILITY(SUM(Revenue) >= 1000)");
  REQUIRE(a.objective.has_value());
  CHECK(a.objective->form == ast::ObjectiveForm::kProbability);
  CHECK(a.objective->cmp == Cmp::kGe);
  CHECK(a.objective->threshold == 1000.0);
  REQUIRE(a.such_that.size() == 1);
  CHECK(a.such_that[0].between);
  CHECK(a.such_that[0].agg.count);
}

TEST_CASE("empty-package query is valid") {
  Ast a = parse("SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) = 0 MINIMIZE SUM(c)");
  REQUIRE(a.such_that.size() == 1);
  CHECK(a.such_that[0].cmp == Cmp::kEq);
  CHECK(a.such_that[0].rhs == 0.0);
  Relation rel("R", 2);
  rel.add_deterministic("c", {1, 2});
  QueryIR q = compile_query(
      "SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) = 0 MINIMIZE SUM(c)", rel);
  auto [lo, hi] = q.count_bounds();
  CHECK(lo == 0);
  CHECK(hi.value() == 0);
}

TEST_CASE("BETWEEN lowers to two rows") {
  Relation rel("R", 3);
  rel.add_deterministic("c", {1, 2, 3});
  QueryIR q = compile_query(
      "SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) BETWEEN 5 AND 10", rel);
  REQUIRE(q.constraints.size() == 2);
  CHECK(q.constraints[0].inner.is_count());
  CHECK(q.constraints[0].cmp == Cmp::kGe);
  CHECK(q.constraints[0].rhs == 5.0);
  CHECK(q.constraints[1].cmp == Cmp::kLe);
  CHECK(q.constraints[1].rhs == 10.0);
}

TEST_CASE("upper-bounded probability is normalized") {
  Relation rel = spq::testing::stock_relation();
  QueryIR q = compile_query(
      "SELECT PACKAGE(*) FROM Stock_Investments SUCH THAT "
      "SUM(Gain) <= 2 WITH PROBABILITY <= 0.1",
      rel);
  REQUIRE(q.constraints.size() == 1);
  CHECK(q.constraints[0].cmp == Cmp::kGe);
  CHECK(q.constraints[0].rhs == 2.0);
  CHECK(*q.constraints[0].prob == Decimal::parse("0.9"));
}

TEST_CASE("normalized chance rows count the same scenarios") {
  // P(S <= v) <= 0.1 over 40 tie-free scenarios against the rewritten
  // P(S >= v) >= 0.9 row: both must accept exactly the same scenario sets.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0, 1);
  std::uniform_real_distribution<double> vd(-2.5, 2.5);
  const std::size_t m = 40;
  const auto p = Decimal::parse("0.1");
  const auto q = p.complement();
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(m);
    for (double& x : s) x = d(rng);
    const double v = vd(rng);
    std::int64_t le = 0, ge = 0;
    for (double x : s) {
      le += x <= v;
      ge += x >= v;
    }
    bool original = p.compare_fraction(le, static_cast<std::int64_t>(m)) >= 0;
    bool rewritten = ge >= q.ceil_times(static_cast<std::int64_t>(m));
    CHECK(original == rewritten);
  }
}

TEST_CASE("REPEAT and WHERE lower to bounds and exclusions") {
  Relation rel = spq::testing::stock_relation();
  QueryIR q = compile_query(
      "SELECT PACKAGE(*) FROM Stock_Investments WHERE price < 200 REPEAT 0 "
      "SUCH THAT COUNT(*) <= 3",
      rel);
  REQUIRE(q.repeat_limit.has_value());
  CHECK(*q.repeat_limit == 0);
  CHECK(q.is_excluded(1));
  CHECK_FALSE(q.is_excluded(3));
  CHECK(q.is_excluded(5));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("SELECT PACKAGE(*) FROM R SUCH THAT SUM(a) <=");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse("SELECT PACKAGE(*) FROM R SUCH THAT SUM(a) >= 1 "
                        "WITH PROBABILITY >= 1.0"),
                  Error);
  CHECK_THROWS_AS(parse("SELECT FROM"), ParseError);
}

TEST_CASE("unknown attribute is reported at lowering") {
  Relation rel = spq::testing::stock_relation();
  CHECK_THROWS_AS(compile_query("SELECT PACKAGE(*) FROM Stock_Investments SUCH "
                                "THAT SUM(volume) <= 3",
                                rel),
                  AttributeError);
}

TEST_CASE("workload templates parse, lower and round-trip") {
  for (auto family :
       {WorkloadFamily::kGalaxy, WorkloadFamily::kPortfolio, WorkloadFamily::kTpch}) {
    WorkloadSpec spec;
    spec.family = family;
    spec.n = 12;
    Workload w = build_workload(spec, 5);
    REQUIRE(w.queries.size() == 8);
    for (const auto& wq : w.queries) {
      CAPTURE(wq.name);
      Ast a = parse(wq.text);
      std::string printed = pretty_print(a);
      CHECK(parse(printed) == a);
      CHECK(pretty_print(parse(printed)) == printed);
      const WorkloadDataset* ds = nullptr;
      for (const auto& d : w.datasets) {
        if (d.name == wq.dataset) ds = &d;
      }
      REQUIRE(ds != nullptr);
      Relation rel = parse_relation(ds->csv, ds->specs, ds->name);
      CHECK_NOTHROW(lower(a, rel));
    }
  }
}

TEST_CASE("AST JSON dump is valid JSON") {
  auto j = nlohmann::json::parse(ast_to_json(parse(spq::testing::kPortfolioQuery)));
  CHECK(j.is_object());
}

TEST_CASE("fuzzed token streams never crash the parser") {
  const std::vector<std::string> vocab = {
      "SELECT", "PACKAGE", "(", "*", ")", "AS", "FROM", "R", "WHERE", "REPEAT",
      "SUCH", "THAT", "SUM", "COUNT", "EXPECTED", "WITH", "PROBABILITY", "OF",
      "AND", "BETWEEN", "MAXIMIZE", "MINIMIZE", "<=", ">=", "=", "<", ">", "<>",
      "-", "+", "/", "1", "0.5", "-3", "a", ",", ".", ";", "2e3", "@", "\"",
      "99999999999999999999999"};
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(0, 30);
  int parsed = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text = "SELECT PACKAGE(*) FROM R SUCH THAT ";
    if (trial % 3 == 0) text.clear();
    for (int k = len(rng); k > 0; --k) text += vocab[pick(rng)] + " ";
    try {
      parse(text);
      ++parsed;
    } catch (const ParseError& e) {
      CHECK(e.line() >= 1);
      CHECK(e.column() >= 1);
    } catch (const Error&) {
      // semantic rejections are also acceptable outcomes
    }
  }
  MESSAGE("fuzz inputs accepted: " << parsed);
}

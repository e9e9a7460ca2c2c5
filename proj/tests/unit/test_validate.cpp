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


#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "spq/spaql.hpp"
#include "spq/validate.hpp"
#include "spq/vg.hpp"

using namespace spq;

namespace {

VGSpec uniform_spec() {
  VGSpec u;
  u.family = Family::kUniform;
  u.params["low"] = Param(0.0);
  u.params["high"] = Param(1.0);
  return u;
}

Relation single(const VGSpec& spec) {
  Relation rel("R", 1);
  rel.add_deterministic("c", {1.0});
  rel.add_stochastic("a", spec);
  return rel;
}

QueryIR query(const Relation& rel, const std::string& text) {
  return canonicalize(compile_query(text, rel), rel);
}

}  // namespace

TEST_CASE("empty package meets a nonpositive threshold") {
  Relation rel = spq::testing::stock_relation();
  QueryIR q = query(rel, spq::testing::kPortfolioQuery);
  ValidationReport r = validate(Package{}, q, rel, {}, 1000, 4);
  CHECK(r.is_feasible);
  REQUIRE(r.constraints.size() == 1);
  CHECK(r.constraints[0].satisfied == 1000);
  CHECK(r.constraints[0].required == 950);
  CHECK(r.constraints[0].surplus == doctest::Approx(0.05));
  CHECK(r.omega == 0.0);
}

TEST_CASE("gamma is the satisfied mass per scenario") {
  VGSpec d;
  d.family = Family::kDiscrete;
  d.sources = {{3.0}, {5.0}};
  Relation rel = single(d);
  std::uint64_t seed = 0;
  for (std::uint64_t s = 1; s < 1000; ++s) {
    if (realize(d, s, "a", 1, 0) != realize(d, s, "a", 1, 1)) {
      seed = s;
      break;
    }
  }
  REQUIRE(seed != 0);
  QueryIR q = query(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(a) >= 1 WITH "
                         "PROBABILITY >= 0.5 MINIMIZE SUM(c)");
  ValidationReport r = validate(Package{{1, 1}}, q, rel, {}, 2, seed);
  REQUIRE(r.constraints.size() == 1);
  CHECK(r.constraints[0].satisfied == 2);
  CHECK(r.constraints[0].gamma == doctest::Approx(4.0));
}

TEST_CASE("ceiling rule rejects one violation at p = 0.999") {
  Relation rel = single(uniform_spec());
  const std::uint64_t m_hat = 100;
  std::uint64_t seed = 0;
  for (std::uint64_t s = 1; s < 100000 && seed == 0; ++s) {
    int violations = 0;
    for (std::size_t j = 0; j < m_hat; ++j) {
      violations += realize(uniform_spec(), s, "a", 1, j) < 0.01;
    }
    if (violations == 1) seed = s;
  }
  REQUIRE(seed != 0);
  QueryIR q = query(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(a) >= 0.01 WITH "
                         "PROBABILITY >= 0.999 MINIMIZE SUM(c)");
  ValidationReport r = validate(Package{{1, 1}}, q, rel, {}, m_hat, seed);
  CHECK(r.constraints[0].satisfied == 99);
  CHECK(r.constraints[0].required == 100);
  CHECK_FALSE(r.is_feasible);
}

TEST_CASE("satisfaction frequency matches the analytic probability") {
  Relation rel = single(uniform_spec());
  QueryIR q = query(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(a) >= 0.3 WITH "
                         "PROBABILITY >= 0.5 MINIMIZE SUM(c)");
  const double q_star = 0.7;
  const std::size_t m_hat = 10000;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ValidationReport r = validate(Package{{1, 1}}, q, rel, {}, m_hat, seed, 2);
    double freq = static_cast<double>(r.constraints[0].satisfied) / m_hat;
    CHECK(std::abs(freq - q_star) <= 5 * std::sqrt(q_star * (1 - q_star) / m_hat));
  }
}

TEST_CASE("expectation estimate is additive over disjoint supports") {
  Relation rel("R", 4);
  rel.add_deterministic("c", {1, 1, 1, 1});
  rel.add_stochastic("a", spq::testing::normal_spec({1, 2, 3, 4}, {1, 2, 1, 3}));
  QueryIR q = query(rel, "SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) <= 9 "
                         "MAXIMIZE EXPECTED(SUM(a))");
  Package a{{1, 2}, {3, 1}}, b{{2, 1}, {4, 3}};
  double wa = validate(a, q, rel, {}, 5000, 21).omega;
  double wb = validate(b, q, rel, {}, 5000, 21).omega;
  double wab = validate(a + b, q, rel, {}, 5000, 21).omega;
  CHECK(wab == doctest::Approx(wa + wb).epsilon(1e-9));
}

TEST_CASE("deterministic violations skip streaming") {
  Relation rel = spq::testing::stock_relation();
  QueryIR q = query(rel, spq::testing::kPortfolioQuery);
  ValidationReport r = validate(Package{{1, 5}}, q, rel, {}, 1000, 4);
  CHECK_FALSE(r.is_feasible);
  CHECK_FALSE(r.reason.empty());
  CHECK_FALSE(r.streamed);
}

TEST_CASE("validation is schedule independent") {
  Relation rel = spq::testing::stock_relation();
  QueryIR q = query(rel, spq::testing::kPortfolioQuery);
  Package x{{3, 2}, {6, 1}};
  ValidationReport one = validate(x, q, rel, {}, 20000, 7, 1);
  ValidationReport four = validate(x, q, rel, {}, 20000, 7, 4);
  CHECK(one.constraints[0].satisfied == four.constraints[0].satisfied);
  CHECK(one.omega == four.omega);
}

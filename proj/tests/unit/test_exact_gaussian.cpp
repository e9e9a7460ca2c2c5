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
#include <random>

#include <fmt/format.h>

#include "doctest.h"
#include "fixtures.hpp"
#include "gaussian_oracle.hpp"
#include "spq/errors.hpp"
#include "spq/exact_gaussian.hpp"
#include "spq/spaql.hpp"

using namespace spq;
using spq::testing::bisect_quantile;
using spq::testing::gaussian_relation;
using spq::testing::normal_spec;
using spq::testing::translate;

namespace {

// Value of a linear row at x with the auxiliary set to c.
double row_lhs(const ExactTranslation& t, const GaussianRow& g, const Package& x,
               double c) {
  std::vector<double> vals(t.linear.problem.vars.size(), 0.0);
  for (std::size_t i = 0; i < t.linear.x_var.size(); ++i) {
    vals[static_cast<std::size_t>(t.linear.x_var[i])] = static_cast<double>(x.get(i + 1));
  }
  vals[static_cast<std::size_t>(g.c_var)] = c;
  double s = 0;
  for (auto [j, a] : t.linear.problem.rows[static_cast<std::size_t>(g.linear_row)].coefs) {
    s += a * vals[static_cast<std::size_t>(j)];
  }
  return s;
}

}  // namespace

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6449).epsilon(1e-4));
  CHECK(normal_quantile(0.9) == doctest::Approx(1.2816).epsilon(1e-4));
  for (double p : {1e-10, 1e-4, 0.01, 0.2, 0.5, 0.75, 0.95, 0.999, 1 - 1e-9}) {
    // Representing p costs about one ulp; dividing by the density amplifies it.
    const double x = bisect_quantile(p);
    const double density = std::exp(-x * x / 2) / std::sqrt(2 * M_PI);
    CHECK(std::abs(normal_quantile(p) - x) < 1e-9 + 4e-16 / density);
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), ArgumentError);
  CHECK_THROWS_AS(normal_quantile(1.0), ArgumentError);
}

TEST_CASE("single tuple at p = 0.5") {
  Relation rel = gaussian_relation({2.0}, {1.0});
  ExactTranslation t = translate(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) >= 0 "
                                      "WITH PROBABILITY >= 0.5 MINIMIZE SUM(c)");
  REQUIRE(t.rows.size() == 1);
  const GaussianRow& g = t.rows[0];
  CHECK(g.z_p == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.v == 0.0);
  CHECK(g.mu == std::vector<double>{2.0});
  CHECK(g.sigma2 == std::vector<double>{1.0});
  CHECK(g.quadratic_terms() == 2);  // c^2 plus one variance term
  CHECK(g.coefficient_count() == 4);
  CHECK(t.to_lp().find("q_") != std::string::npos);
}

TEST_CASE("independent rows have 2N + 2 coefficients") {
  for (std::size_t n : {1, 3, 7}) {
    Relation rel = gaussian_relation(std::vector<double>(n, 1.5), std::vector<double>(n, 0.5));
    ExactTranslation t = translate(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) >= 1 "
                                        "WITH PROBABILITY >= 0.9 MINIMIZE SUM(c)");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].coefficient_count() == 2 * n + 2);
  }
}

TEST_CASE("correlated pair adds a cross term") {
  Relation rel = gaussian_relation({1.0, 2.0}, {1.0, 1.0});
  Covariance cov = parse_covariance_csv("i1,i2,attr,value\n1,2,A,0.3\n");
  ExactTranslation t = translate(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) >= 1 "
                                      "WITH PROBABILITY >= 0.9 MINIMIZE SUM(c)",
                                 &cov);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].correlated());
  CHECK(t.rows[0].quadratic_terms() == 4);  // c^2, two variances, one cross term
  CHECK(t.rows[0].quadratic_form(Package{{1, 1}, {2, 1}}) == doctest::Approx(2.6));
  Covariance bad = parse_covariance_csv("i1,i2,attr,value\n1,2,A,5\n");
  CHECK_THROWS_AS(translate(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) >= 1 "
                                 "WITH PROBABILITY >= 0.9 MINIMIZE SUM(c)",
                            &bad),
                  NumericsError);
  CHECK_THROWS_AS(parse_covariance_csv("a,b\n1,2\n"), ParseError);
}

TEST_CASE("direct feasibility examples") {
  Relation rel = gaussian_relation({0.0}, {1.0});
  ExactTranslation t = translate(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) >= 0 "
                                      "WITH PROBABILITY >= 0.95 MINIMIZE SUM(c)");
  CHECK_FALSE(check_exact_feasible(Package{{1, 1}}, t.rows[0]));
  CHECK(check_exact_feasible(Package{}, t.rows[0]));
  ExactTranslation neg = translate(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) >= -3 "
                                        "WITH PROBABILITY >= 0.6 MINIMIZE SUM(c)");
  CHECK(check_exact_feasible(Package{}, neg.rows[0]));
}

TEST_CASE("unsupported inputs are rejected") {
  Relation rel = gaussian_relation({1.0, 2.0}, {1.0, 1.0});
  CHECK_THROWS_AS(translate(rel, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) >= 1 "
                                 "WITH PROBABILITY >= 0.3 MINIMIZE SUM(c)"),
                  NonConvexError);
  CHECK_THROWS_AS(translate(rel, "SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) <= 2 "
                                 "MAXIMIZE PROBABILITY OF (SUM(A) >= 1)"),
                  NotApplicableError);
  Relation pareto("R", 1);
  pareto.add_deterministic("c", {1.0});
  VGSpec p;
  p.family = Family::kPareto;
  p.params["scale"] = Param(1.0);
  p.params["shape"] = Param(3.0);
  pareto.add_stochastic("A", p);
  CHECK_THROWS_AS(translate(pareto, "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) >= 1 "
                                    "WITH PROBABILITY >= 0.9 MINIMIZE SUM(c)"),
                  NotApplicableError);
}

TEST_CASE("mean row with the exact auxiliary reproduces the direct check") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> mu(-2, 3), sd(0.1, 2), v(-3, 4);
  std::uniform_int_distribution<int> cnt(0, 3), coin(0, 1);
  const char* probs[] = {"0.5", "0.8", "0.9", "0.95", "0.99"};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
    std::vector<double> m(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = mu(rng);
      s[i] = sd(rng);
    }
    Relation rel = gaussian_relation(m, s);
    const std::string text = fmt::format(
        "SELECT PACKAGE(*) FROM R SUCH THAT SUM(A) {} {} WITH PROBABILITY >= {} "
        "MINIMIZE SUM(c)",
        coin(rng) ? ">=" : "<=", std::round(v(rng) * 100) / 100, probs[trial % 5]);
    ExactTranslation t = translate(rel, text);
    Package x;
    for (TupleId i = 1; i <= n; ++i) x.set(i, cnt(rng));
    const GaussianRow& g = t.rows[0];
    const double c = std::sqrt(g.quadratic_form(x));
    const LinearRow& row = t.linear.problem.rows[static_cast<std::size_t>(g.linear_row)];
    CHECK(holds(row_lhs(t, g, x, c), row.cmp, row.rhs) == check_exact_feasible(x, g));
  }
}

TEST_CASE("analytic verdict agrees with sampling") {
  auto agree = spq::testing::gaussian_agreement(8, 12, 20000);
  for (const auto& f : agree.failures) MESSAGE(f);
  CHECK(agree.disagreements == 0);
  CHECK(agree.feasible_verdicts > 0);
  CHECK(agree.feasible_verdicts < agree.trials);
}

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


// Random tiny chance-constrained instances and a canonical row listing used
// to compare formulations up to variable and row order.

#ifndef SPQ_TESTS_INSTANCES_HPP_
#define SPQ_TESTS_INSTANCES_HPP_

#include <algorithm>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "spq/saa.hpp"
#include "spq/spaql.hpp"
#include "spq/summary.hpp"

namespace spq::testing {

struct Instance {
  Relation relation;
  std::string query;
};

// N tuples with a deterministic cost `c` and a normal attribute `a`; one
// chance constraint on `a`, a COUNT cap and an expectation objective.
inline Instance random_instance(std::mt19937_64& rng, std::size_t n_max,
                                int count_cap, bool cost_objectives = false) {
  std::uniform_int_distribution<std::size_t> ns(2, n_max);
  std::uniform_real_distribution<double> mu(-2.0, 4.0), sd(0.2, 2.0),
      cost(1.0, 5.0), v(-1.0, 4.0);
  std::uniform_int_distribution<int> coin(0, 1), pidx(0, 3);
  const std::size_t n = ns(rng);
  std::vector<double> c(n), m(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = std::round(cost(rng) * 10) / 10;
    m[i] = std::round(mu(rng) * 10) / 10;
    s[i] = std::round(sd(rng) * 10) / 10;
  }
  Instance inst{Relation("R", n), ""};
  inst.relation.add_deterministic("c", c);
  VGSpec spec;
  spec.family = Family::kNormal;
  spec.params["mean"] = Param(m);
  spec.params["stddev"] = Param(s);
  inst.relation.add_stochastic("a", spec);
  const char* probs[] = {"0.5", "0.6", "0.7", "0.8"};
  const bool ge = coin(rng) == 1;
  const double rhs = std::round(v(rng) * 10) / 10;
  const bool on_cost = cost_objectives && coin(rng) == 1;
  inst.query = fmt::format(
      "SELECT PACKAGE(*) FROM R SUCH THAT COUNT(*) BETWEEN 1 AND {} AND "
      "SUM(a) {} {} WITH PROBABILITY >= {} {} {}",
      count_cap, ge ? ">=" : "<=", rhs, probs[pidx(rng)],
      coin(rng) == 1 ? "MAXIMIZE" : "MINIMIZE",
      on_cost ? "SUM(c)" : "EXPECTED(SUM(a))");
  return inst;
}

// One string per row: kind, comparison, right-hand side and the decision
// coefficients by tuple; indicator slots are anonymous.
inline std::vector<std::string> canonical_rows(const SaaFormulation& f) {
  const MilpProblem& p = f.problem;
  auto term_list = [&](const SparseRow& coefs) {
    std::vector<std::pair<std::string, double>> terms;
    for (auto [j, a] : coefs) {
      const MilpVar& v = p.vars[static_cast<std::size_t>(j)];
      std::string key = v.role == VarRole::kIndicator ? "y" : v.name;
      for (std::size_t i = 0; i < f.x_var.size(); ++i) {
        if (f.x_var[i] == j) key = "x" + std::to_string(i + 1);
      }
      terms.emplace_back(key, a);
    }
    std::sort(terms.begin(), terms.end());
    std::string out;
    for (auto& [k, a] : terms) out += fmt::format("{}:{} ", k, a);
    return out;
  };
  std::vector<std::string> rows;
  for (const LinearRow& r : p.rows) {
    rows.push_back(fmt::format("row {} {} | {}", cmp_symbol(r.cmp), r.rhs,
                               term_list(r.coefs)));
  }
  for (const IndicatorRow& r : p.indicators) {
    rows.push_back(fmt::format("ind {} {} | {}", cmp_symbol(r.cmp), r.rhs,
                               term_list(r.coefs)));
  }
  SparseRow obj;
  for (std::size_t j = 0; j < p.vars.size(); ++j) {
    if (p.objective[j] != 0.0) obj.emplace_back(static_cast<int>(j), p.objective[j]);
  }
  rows.push_back("obj | " + term_list(obj));
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace spq::testing

#endif  // SPQ_TESTS_INSTANCES_HPP_

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


// Shared fixtures for the unit tests: the six-tuple stock table with its
// three example gain scenarios and small builders for hand-made inputs.

#ifndef SPQ_TESTS_FIXTURES_HPP_
#define SPQ_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "spq/model.hpp"
#include "spq/vg.hpp"

namespace spq::testing {

inline const char* kPortfolioQuery =
    "SELECT PACKAGE(*) AS Portfolio FROM Stock_Investments SUCH THAT "
    "SUM(price) <= 1000 AND SUM(Gain) >= -10 WITH PROBABILITY >= 0.95 "
    "MAXIMIZE EXPECTED(SUM(Gain))";

// Three example gain realizations for tuples 1..6, one row per scenario.
inline std::vector<std::vector<double>> example_gains() {
  return {{0.1, 0.05, -0.2, 0.2, 0.1, -0.7},
          {-0.2, -0.03, 0.5, 0.7, -0.7, -0.001},
          {0.01, 0.02, -0.1, -0.3, 0.2, 0.3}};
}

inline Relation stock_relation() {
  Relation rel("Stock_Investments", 6);
  rel.add_deterministic("price", {234, 234, 140, 140, 258, 258});
  rel.add_deterministic("sell_in", {1, 7, 1, 7, 1, 7});
  VGSpec gain;
  gain.family = Family::kNormal;
  gain.params["mean"] = Param(0.0);
  gain.params["stddev"] = Param(0.5);
  rel.add_stochastic("Gain", gain);
  return rel;
}

// Scenario set for one attribute from explicit rows (scenario-major).
inline ScenarioSet scenario_set(const std::string& attr,
                                const std::vector<std::vector<double>>& rows) {
  ScenarioSet s;
  s.attrs = {attr};
  s.m = rows.size();
  s.n = rows.empty() ? 0 : rows.front().size();
  s.data.emplace_back();
  for (const auto& r : rows) s.data[0].insert(s.data[0].end(), r.begin(), r.end());
  return s;
}

inline VGSpec normal_spec(std::vector<double> mean, std::vector<double> sd) {
  VGSpec s;
  s.family = Family::kNormal;
  s.params["mean"] = Param(std::move(mean));
  s.params["stddev"] = Param(std::move(sd));
  return s;
}

inline VGSpec point_spec(std::vector<double> values) {
  VGSpec s;
  s.family = Family::kPointMass;
  s.params["value"] = Param(std::move(values));
  return s;
}

}  // namespace spq::testing

#endif  // SPQ_TESTS_FIXTURES_HPP_

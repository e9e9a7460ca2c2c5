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

#ifndef SPQ_SAA_HPP_
#define SPQ_SAA_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spq/milp.hpp"
#include "spq/model.hpp"
#include "spq/vg.hpp"

namespace spq {

struct FormulationOptions {
  double default_cap = 1e6;  // x_i bound when nothing else bounds it
};

// A deterministic integer program built from a canonical query, with the
// bookkeeping needed to read a package back and to inspect its rows.
struct SaaFormulation {
  MilpProblem problem;
  std::vector<int> x_var;  // tuple id - 1 -> variable index
  // (constraint index k, scenario or summary index j) -> indicator variable
  std::map<std::pair<std::size_t, std::size_t>, int> indicator;
  std::map<std::size_t, int> counting_row;  // constraint index -> row index
  bool infeasible_by_construction = false;
  std::vector<std::string> warnings;
};

// Per-tuple coefficients of `expr` with stochastic attributes replaced by
// their mean columns.
std::vector<double> mean_coefficients(const LinearExpr& expr,
                                      const Relation& rel,
                                      const MeanColumns& means);

// The problem without probabilistic rows (Q0). A probability objective keeps
// its epigraph row, evaluated on `scenarios`, since it defines the objective.
SaaFormulation formulate_base(const QueryIR& q, const Relation& rel,
                              const ScenarioSet& scenarios,
                              std::uint64_t scenario_seed,
                              const MeanColumns& means,
                              const FormulationOptions& opts = {});

// Adds, for constraint k, one indicator per coefficient vector and the
// counting row  sum y >= ceil(p * count).
void add_probabilistic_rows(SaaFormulation& f, const QueryIR& q,
                            std::size_t k,
                            const std::vector<std::vector<double>>& columns);

// Naive SAA over M in-memory scenarios drawn with `scenario_seed`.
SaaFormulation formulate_saa(const QueryIR& q, const Relation& rel,
                             const ScenarioSet& scenarios,
                             std::uint64_t scenario_seed,
                             const MeanColumns& means,
                             const FormulationOptions& opts = {});

// Exact number of nonzero coefficients in rows and indicator rows.
std::size_t coefficient_count(const SaaFormulation& f);

Package package_from_solution(const SaaFormulation& f,
                              const std::vector<double>& values);

}  // namespace spq

#endif  // SPQ_SAA_HPP_

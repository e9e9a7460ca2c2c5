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

#ifndef SPQ_SUMMARY_HPP_
#define SPQ_SUMMARY_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "spq/saa.hpp"

namespace spq {

// Z disjoint blocks of 0-based scenario ids covering [0, M).
struct Partitioning {
  std::vector<std::vector<std::size_t>> blocks;
};

// Random balanced partition: block sizes differ by at most one, each block
// sorted ascending. ArgumentError unless 1 <= z <= m.
Partitioning partition_scenarios(std::size_t m, std::size_t z,
                                 std::uint64_t seed);

// Values of one constraint's inner function for all tuples in scenario j.
using ColumnFn = std::function<std::vector<double>(std::size_t j)>;

// Scores sum_i s_ij * prev_x_i over the block and returns the first n ids,
// descending by score for >= rows and ascending for <= rows, ties by id.
std::vector<std::size_t> select_gz(std::span<const std::size_t> block,
                                   std::size_t n, const Package& prev_x,
                                   const std::function<double(std::size_t j)>& score,
                                   Cmp cmp);

// Convenience overload scoring through full columns.
std::vector<std::size_t> select_gz(std::span<const std::size_t> block,
                                   std::size_t n, const Package& prev_x,
                                   const ColumnFn& column, Cmp cmp);

struct Summary {
  std::vector<double> values;  // one per tuple
  std::size_t partition = 0;
  double alpha = 0.0;
  std::vector<std::size_t> scenarios;  // G_z
  Cmp direction = Cmp::kGe;            // >= rows take minima
  std::vector<TupleId> keep_set;
};

// Tuple-wise minimum (>= rows) or maximum (<= rows) over the columns of G;
// tuples in keep_set take the opposite extremum.
Summary build_alpha_summary(const std::vector<std::vector<double>>& g,
                            Cmp direction,
                            const std::set<TupleId>& keep_set = {});

enum class SummaryStrategy { kInMemory, kTupleWise, kScenarioWise };
const char* strategy_name(SummaryStrategy s);
SummaryStrategy strategy_from_name(const std::string& name);

// Number of scenarios a summary of block size `block` uses at level alpha.
std::size_t summary_size(double alpha, std::size_t z, std::size_t m,
                         std::size_t block);

// Validates that alpha is 0 or a grid value q*Z/M (capped at 1) and returns
// the integer level q; ArgumentError otherwise.
std::size_t alpha_level(double alpha, std::size_t z, std::size_t m);
double alpha_from_level(std::size_t level, std::size_t z, std::size_t m);

struct CsaInput {
  const QueryIR* query = nullptr;  // canonical
  const Relation* relation = nullptr;
  const MeanColumns* means = nullptr;
  std::size_t m = 0;
  std::size_t z = 1;
  std::uint64_t scenario_seed = 0;     // optimization stream
  std::uint64_t partition_seed = 0;
  const ScenarioSet* scenarios = nullptr;  // required for kInMemory
  SummaryStrategy strategy = SummaryStrategy::kInMemory;
  bool reorder = true;  // order G_z by the previous solution's scores
  FormulationOptions formulation;
  std::size_t jobs = 1;
};

struct CsaFormulation {
  SaaFormulation saa;
  // per probabilistic constraint index k: its Z summaries
  std::map<std::size_t, std::vector<Summary>> summaries;
};

using KeySets = std::map<std::size_t, std::set<TupleId>>;

// CSA problem for per-constraint alpha (indexed like q.constraints; entries
// for non-probabilistic rows are ignored). alpha_k = 0 drops row k.
// keep_sets[k] lists tuples that take the opposite extremum in row k.
CsaFormulation formulate_csa(const CsaInput& in,
                             const std::vector<double>& alpha,
                             const Package& prev_x,
                             const KeySets& keep_sets = {});

// Summaries of one constraint through the selected strategy.
std::vector<Summary> build_summaries(const CsaInput& in, std::size_t k,
                                     double alpha, const Package& prev_x,
                                     const std::set<TupleId>& keep_set);

}  // namespace spq

#endif  // SPQ_SUMMARY_HPP_

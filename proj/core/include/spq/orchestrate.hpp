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

#ifndef SPQ_ORCHESTRATE_HPP_
#define SPQ_ORCHESTRATE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spq/alpha_fit.hpp"
#include "spq/bounds.hpp"
#include "spq/milp.hpp"
#include "spq/model.hpp"
#include "spq/summary.hpp"
#include "spq/validate.hpp"

namespace spq {

struct RunConfig {
  std::size_t m0 = 100;           // initial optimization scenarios
  std::size_t m_increment = 100;  // m
  std::size_t z_increment = 1;    // z
  std::size_t m_hat = 1000000;    // validation scenarios
  std::size_t m_cap = 1000;       // largest M tried before giving up
  double epsilon = 0.2;
  double time_limit_s = 0.0;      // per MILP solve, 0 = none
  std::size_t node_limit = 0;     // per MILP solve, 0 = none
  std::uint64_t seed = 7;
  std::optional<std::uint64_t> validation_seed;  // default derived from seed
  SummaryStrategy strategy = SummaryStrategy::kInMemory;
  bool reorder = true;
  std::size_t csa_iteration_cap = 50;
  std::size_t csa_call_cap = 200;
  double default_cap = 1e6;
  bool fixed_m = false;  // one SAA / one CSA-Solve at M = m0, Z = z0
  std::size_t z0 = 1;
  std::size_t jobs = 1;
};

std::uint64_t optimization_seed(const RunConfig& cfg);
std::uint64_t validation_seed(const RunConfig& cfg);

// State shared by every run of one query on one validation stream.
struct RunContext {
  QueryIR query;  // canonical
  const Relation* relation = nullptr;
  MeanColumns means;
  std::uint64_t validation_seed = 0;
  std::size_t m_hat = 0;
  bool have_bounds = false;
  BoundContext bounds;
  std::vector<std::string> warnings;
};

RunContext prepare_run(const QueryIR& q, const Relation& rel,
                       const RunConfig& cfg);
// Fills the scenario value and package size bounds (costs N * M_hat draws).
void ensure_bounds(RunContext& ctx, const RunConfig& cfg);

struct TraceEntry {
  std::string stage;  // naive, x0, csa
  std::size_t m = 0;
  std::size_t z = 0;
  std::size_t iteration = 0;
  std::vector<double> alpha;  // per probabilistic row, empty for naive
  Package x;
  std::string solver_status;
  std::size_t nodes = 0;
  bool validated = false;
  bool feasible = false;
  std::vector<double> surplus;
  double omega = 0.0;
  std::optional<double> epsilon;
  std::string note;
};

struct RunResult {
  std::string algorithm;
  bool success = false;    // returned a validation-feasible package
  bool certified = false;  // and an epsilon certificate holds
  Package package;
  ValidationReport report;
  std::optional<EpsilonResult> certificate;
  std::optional<BoundReport> bounds;
  std::optional<double> epsilon_min;
  std::size_t final_m = 0;
  std::size_t final_z = 0;
  std::size_t csa_calls = 0;
  std::string failure;
  std::vector<TraceEntry> trace;
  std::vector<std::string> warnings;
};

RunResult naive(const RunContext& ctx, const RunConfig& cfg);
RunResult summary_search(RunContext& ctx, const RunConfig& cfg);

// One history entry of CSA-Solve.
struct HistoryEntry {
  Package x;
  std::vector<double> alpha;  // per constraint index, 0 for other rows
  bool validated = false;     // false: synthetic point from an infeasible CSA
  ValidationReport report;
  std::vector<double> surplus;  // per probabilistic row (report order)
  std::optional<EpsilonResult> epsilon;
  bool certificate_possible = true;
};

class History {
 public:
  bool contains(const Package& x, const std::vector<double>& alpha) const;
  void add(HistoryEntry e) { entries_.push_back(std::move(e)); }
  const std::vector<HistoryEntry>& entries() const { return entries_; }
  // (alpha_k, r_k) points of the row at report position `pos`.
  std::vector<AlphaPoint> points(std::size_t pos, std::size_t k) const;
  // Best feasible entry (by canonical objective), else the validated entry
  // with the smallest total shortfall; -1 when no entry was validated.
  int best(Sense sense) const;

 private:
  std::vector<HistoryEntry> entries_;
};

struct CsaSolveInput {
  Package x0;
  bool x0_unbounded = false;
  std::size_t m = 0;
  std::size_t z = 1;
  const ScenarioSet* scenarios = nullptr;  // M optimization scenarios
};

struct CsaSolveResult {
  HistoryEntry best;
  bool terminated = false;  // feasible and certified (or uncertifiable)
  bool cycle = false;
  std::size_t iterations = 0;
  std::vector<TraceEntry> trace;
};

CsaSolveResult csa_solve(RunContext& ctx, const RunConfig& cfg,
                         const CsaSolveInput& in);

}  // namespace spq

#endif  // SPQ_ORCHESTRATE_HPP_

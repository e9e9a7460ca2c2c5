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

#ifndef SPQ_MILP_HPP_
#define SPQ_MILP_HPP_

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "spq/model.hpp"

namespace spq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarRole { kDecision, kIndicator, kAuxiliary };

struct MilpVar {
  std::string name;
  double lo = 0.0;
  double hi = kInf;
  bool integer = true;
  VarRole role = VarRole::kDecision;
  bool capped = false;  // hi is the configured default cap, not a real bound
};

using SparseRow = std::vector<std::pair<int, double>>;

struct LinearRow {
  std::string name;
  SparseRow coefs;
  Cmp cmp = Cmp::kLe;
  double rhs = 0.0;
};

// y = 1  implies  sum coefs * x  (cmp)  rhs.
struct IndicatorRow {
  std::string name;
  int indicator = -1;
  SparseRow coefs;
  Cmp cmp = Cmp::kGe;
  double rhs = 0.0;
};

struct MilpProblem {
  std::string name = "spq";
  Sense sense = Sense::kMinimize;
  std::vector<MilpVar> vars;
  std::vector<double> objective;  // one coefficient per variable
  double objective_constant = 0.0;
  std::vector<LinearRow> rows;
  std::vector<IndicatorRow> indicators;

  int add_var(MilpVar v, double obj = 0.0);
  void add_row(LinearRow r) { rows.push_back(std::move(r)); }
  std::size_t nonzeros() const;  // rows + indicator inner terms + indicator
  double evaluate(const std::vector<double>& values) const;
  // Checks bounds, integrality, rows and indicators at tolerance `tol`.
  bool feasible(const std::vector<double>& values, double tol = 1e-6) const;
};

enum class SolveStatus { kOptimal, kInfeasible, kTimeLimitBest, kUnbounded };
const char* status_name(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = 0.0;
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
};

struct SolverOptions {
  double time_limit_s = 0.0;    // 0: none
  std::size_t node_limit = 0;   // 0: none
  double default_cap = 1e6;     // bound for otherwise unbounded x_i
};

// Tightens variable bounds from linear rows (activity-based propagation).
// Returns false if some row is proven infeasible over the box.
bool propagate_bounds(MilpProblem& p, int passes = 8);

// Smallest big-M constant for an indicator row over the problem's box (and
// the single-row relaxation of every nonnegative <= row).
double big_m(const MilpProblem& p, const IndicatorRow& ind);

// Replaces every indicator row by a big-M linear row, after bound
// propagation. Throws UnboundedError naming a variable with infinite bound.
MilpProblem linearize(const MilpProblem& p);

// Exact branch-and-bound with LP relaxations solved by a bounded dual
// simplex. Linearizes first when indicator rows are present.
MilpSolution solve(const MilpProblem& p, const SolverOptions& opts = {});

// CPLEX LP text. Indicators are written in linearized form.
std::string export_lp(const MilpProblem& p);

}  // namespace spq

#endif  // SPQ_MILP_HPP_

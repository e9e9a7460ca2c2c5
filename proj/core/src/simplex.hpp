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

#ifndef SPQ_SRC_SIMPLEX_HPP_
#define SPQ_SRC_SIMPLEX_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spq::internal {

// min c'x  s.t.  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi.
// Every column must be boxed (finite bounds). A is dense, row-major.
struct LpData {
  int m = 0;
  int n = 0;
  std::vector<double> a;
  std::vector<double> c;
  std::vector<double> row_lo;
  std::vector<double> row_hi;

  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

enum class VarState : std::int8_t { kBasic, kAtLower, kAtUpper };

// Variables 0..n-1 are structural, n..n+m-1 the row activities.
struct Basis {
  std::vector<int> head;           // basic variable of each row
  std::vector<VarState> state;     // per variable
  bool empty() const { return head.empty(); }
};

enum class LpStatus { kOptimal, kInfeasible, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;  // structural values
  double objective = 0.0;
  Basis basis;
  std::size_t iterations = 0;
};

// Bounded dual simplex with an explicit basis inverse, Harris ratio test and
// a Bland fallback against stalling. Any starting basis is made dual
// feasible by placing boxed nonbasic columns on the bound matching the sign
// of their reduced cost, so a parent's optimal basis warm-starts children.
class DualSimplex {
 public:
  explicit DualSimplex(const LpData& lp);

  LpResult solve(const std::vector<double>& col_lo,
                 const std::vector<double>& col_hi, const Basis* warm,
                 std::size_t iteration_limit);

 private:
  void slack_basis();
  bool refactor();
  void compute_primal();
  void compute_duals();
  double column_dot(const double* row, int j) const;
  void column(int j, std::vector<double>& out) const;
  double lower(int j) const;
  double upper(int j) const;
  void fix_dual_infeasibility();

  const LpData& lp_;
  int m_, n_;
  std::vector<double> lo_, hi_;  // n + m
  std::vector<int> head_;
  std::vector<VarState> state_;
  std::vector<double> binv_;  // m x m, row-major
  std::vector<double> xb_;
  std::vector<double> value_;  // all n + m variables
  std::vector<double> pi_;
  std::vector<double> d_;
};

}  // namespace spq::internal

#endif  // SPQ_SRC_SIMPLEX_HPP_

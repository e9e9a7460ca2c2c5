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

#ifndef SPQ_VALIDATE_HPP_
#define SPQ_VALIDATE_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spq/model.hpp"
#include "spq/vg.hpp"

namespace spq {

struct ConstraintReport {
  std::size_t index = 0;  // position in q.constraints
  std::string label;
  double p = 0.0;
  std::size_t satisfied = 0;   // Y_k
  std::int64_t required = 0;   // ceil(p * M_hat)
  double surplus = 0.0;        // Y_k / M_hat - p
  double gamma = 0.0;          // mass of the inner function on satisfied scenarios
};

struct ValidationReport {
  bool is_feasible = false;
  std::string reason;  // set when a deterministic rule fails
  bool streamed = false;
  std::vector<ConstraintReport> constraints;  // probabilistic rows, epigraph excluded
  // Objective of the canonical problem: expectation estimate, deterministic
  // value or satisfied frequency of the epigraph row.
  double omega = 0.0;
  // Objective as the user wrote it (1 - omega for complemented probabilities).
  double omega_user = 0.0;
  double epsilon_upper = std::numeric_limits<double>::quiet_NaN();
  std::size_t m_hat = 0;

  bool all_surplus_nonnegative() const;
  double total_shortfall() const;  // sum max(0, -r_k)
};

// Out-of-sample check of `x` on M_hat scenarios of the stream `seed`; only
// tuples in the support of x are realized. `means` back expectation rows.
ValidationReport validate(const Package& x, const QueryIR& q,
                          const Relation& rel, const MeanColumns& means,
                          std::size_t m_hat, std::uint64_t seed,
                          std::size_t jobs = 1);

}  // namespace spq

#endif  // SPQ_VALIDATE_HPP_

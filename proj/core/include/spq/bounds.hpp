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

#ifndef SPQ_BOUNDS_HPP_
#define SPQ_BOUNDS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spq/model.hpp"
#include "spq/saa.hpp"
#include "spq/vg.hpp"

namespace spq {

// Range of per-tuple objective values over a validation stream.
struct ValueBounds {
  double lo = 0.0;
  double hi = 0.0;
};

// Min and max of the objective inner function over every non-excluded tuple
// and every scenario of the stream `seed`.
ValueBounds scenario_value_bounds(const QueryIR& q, const Relation& rel,
                                  std::size_t m_hat, std::uint64_t seed,
                                  std::size_t jobs = 1);

struct SizeBounds {
  double lo = 0.0;
  double hi = kInf;
};

// Package size bounds from COUNT rows and propagated multiplicity bounds.
SizeBounds package_size_bounds(const QueryIR& q, const Relation& rel,
                               const MeanColumns& means,
                               const FormulationOptions& opts = {});

// One probabilistic row seen from a minimization objective.
struct InteractionInfo {
  std::size_t index = 0;
  std::string label;
  Interaction kind = Interaction::kIndependent;
  double p = 0.0;
  Cmp cmp = Cmp::kGe;  // relation after rewriting the objective as a minimum
  double v = 0.0;      // right-hand side after the same rewrite
};

struct BoundContext {
  Sense sense = Sense::kMinimize;  // canonical objective sense
  bool probability_objective = false;
  double s_lo = 0.0;  // objective value bounds, original orientation
  double s_hi = 0.0;
  double l_lo = 0.0;
  double l_hi = kInf;
  std::optional<double> omega0;         // optimum of the unconstrained problem
  std::optional<double> best_feasible;  // best validated feasible objective
  std::vector<InteractionInfo> interactions;
};

BoundContext make_bound_context(const QueryIR& q, ValueBounds s,
                                SizeBounds l);

struct BoundCandidate {
  std::string source;
  double value = 0.0;
  bool applicable = true;
};

// Bounds in the objective's own orientation: lower <= optimum <= upper.
struct BoundReport {
  double lower = -kInf;
  double upper = kInf;
  std::vector<BoundCandidate> lower_candidates;
  std::vector<BoundCandidate> upper_candidates;
};

BoundReport compute_bounds(const BoundContext& ctx);
double omega_lower(const BoundContext& ctx);
double omega_upper(const BoundContext& ctx);

enum class CertificateCase { kMinNonneg, kMinNeg, kMaxNonneg, kMaxNeg };
const char* case_name(CertificateCase c);

struct EpsilonResult {
  double epsilon = 0.0;
  CertificateCase certificate = CertificateCase::kMinNonneg;
  std::string guarantee;
};

// Approximation error of a candidate objective. The case follows the sign of
// the lower bound (minimization) or upper bound (maximization). CaseError on
// a zero bound or a sign mismatch.
EpsilonResult epsilon_q(double omega_q, double lower, double upper,
                        Sense sense);

// Smallest certifiable error; CaseError when no case applies.
double epsilon_min(double lower, double upper, Sense sense);

// sum_{i=0}^{floor(k)} C(n,i) p^i (1-p)^(n-i).
double rho(double k, std::int64_t n, double p);
// exp(-2 n (q - p)^2); a bound on rho(p n, n, q) when p <= q.
double hoeffding(std::int64_t n, double q_success, double p_target);
bool hoeffding_applies(std::int64_t n, double q_success, double p_target);

// ceil((2 / (1 - p)) (ln(1 / (1 - delta)) + n)).
std::int64_t campi_min_scenarios(std::int64_t n, double p, double delta);

}  // namespace spq

#endif  // SPQ_BOUNDS_HPP_

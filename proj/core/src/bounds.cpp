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

#include "spq/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "spq/errors.hpp"
#include "spq/parallel.hpp"

namespace spq {

namespace {

constexpr double kBoundTol = 1e-9;

// s * l with 0 * inf = 0.
double times(double s, double l) {
  if (s == 0.0 || l == 0.0) return 0.0;
  return s * l;
}

}  // namespace

ValueBounds scenario_value_bounds(const QueryIR& q, const Relation& rel,
                                  std::size_t m_hat, std::uint64_t seed,
                                  std::size_t jobs) {
  const ExprSampler sampler(rel, q.objective.inner, seed);
  std::vector<TupleId> ids;
  for (TupleId i = 1; i <= rel.size(); ++i) {
    if (!q.is_excluded(i)) ids.push_back(i);
  }
  ValueBounds b;
  if (ids.empty()) return b;
  if (!sampler.stochastic()) {
    b.lo = b.hi = sampler.deterministic_part(ids.front());
    for (TupleId i : ids) {
      b.lo = std::min(b.lo, sampler.deterministic_part(i));
      b.hi = std::max(b.hi, sampler.deterministic_part(i));
    }
    return b;
  }
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (m_hat + kChunk - 1) / kChunk;
  std::vector<ValueBounds> parts(chunks, {kInf, -kInf});
  for_each_chunk(m_hat, kChunk, jobs, [&](std::size_t c, std::size_t lo,
                                          std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      for (TupleId i : ids) {
        const double v = sampler.value(i, j);
        parts[c].lo = std::min(parts[c].lo, v);
        parts[c].hi = std::max(parts[c].hi, v);
      }
    }
  });
  b = {kInf, -kInf};
  for (const ValueBounds& p : parts) {
    b.lo = std::min(b.lo, p.lo);
    b.hi = std::max(b.hi, p.hi);
  }
  return b;
}

SizeBounds package_size_bounds(const QueryIR& q_in, const Relation& rel,
                               const MeanColumns& means,
                               const FormulationOptions& opts) {
  const QueryIR q = q_in.canonical ? q_in : canonicalize(q_in, rel);
  ScenarioSet none;
  none.n = rel.size();
  SaaFormulation base = formulate_base(q, rel, none, 0, means, opts);
  MilpProblem& p = base.problem;
  SizeBounds out;
  auto [lo, hi] = q.count_bounds();
  out.lo = static_cast<double>(lo);
  if (hi) out.hi = static_cast<double>(*hi);
  if (!propagate_bounds(p)) return out;
  double sum = 0.0;
  for (int j : base.x_var) {
    const MilpVar& v = p.vars[j];
    if (v.capped) {
      sum = kInf;
      break;
    }
    sum += v.hi;
  }
  out.hi = std::min(out.hi, sum);
  return out;
}

BoundContext make_bound_context(const QueryIR& q, ValueBounds s,
                                SizeBounds l) {
  BoundContext ctx;
  ctx.sense = q.objective.sense;
  ctx.probability_objective = q.objective.kind == ObjectiveKind::kProbability;
  ctx.s_lo = s.lo;
  ctx.s_hi = s.hi;
  ctx.l_lo = l.lo;
  ctx.l_hi = l.hi;
  const bool max = q.objective.sense == Sense::kMaximize;
  for (std::size_t k : q.probabilistic_indices()) {
    const Constraint& c = q.constraints[k];
    if (c.epigraph || !c.prob) continue;
    InteractionInfo info;
    info.index = k;
    info.label = c.label;
    info.kind = classify_interaction(q.objective, c);
    info.p = c.prob->value();
    info.cmp = max ? flip(c.cmp) : c.cmp;
    info.v = max ? -c.rhs : c.rhs;
    ctx.interactions.push_back(info);
  }
  return ctx;
}

namespace {

// All candidates for a minimization objective with values in [s_lo, s_hi].
BoundReport min_form_bounds(double s_lo, double s_hi, double l_lo, double l_hi,
                            const std::vector<InteractionInfo>& rows,
                            std::optional<double> omega0,
                            std::optional<double> best) {
  BoundReport r;
  auto lower = [&](std::string src, double v, bool ok = true) {
    r.lower_candidates.push_back({std::move(src), v, ok});
  };
  auto upper = [&](std::string src, double v, bool ok = true) {
    r.upper_candidates.push_back({std::move(src), v, ok});
  };
  // Per-scenario extremes of the package sum.
  const double lo_sum = s_lo >= 0 ? times(s_lo, l_lo) : times(s_lo, l_hi);
  const double hi_sum = s_hi >= 0 ? times(s_hi, l_hi) : times(s_hi, l_lo);
  lower(s_lo >= 0 ? "agnostic:s_lo*l_lo" : "agnostic:s_lo*l_hi", lo_sum);
  upper(s_hi >= 0 ? "agnostic:s_hi*l_hi" : "agnostic:s_hi*l_lo", hi_sum);

  for (const InteractionInfo& row : rows) {
    const double p = row.p;
    const std::string tag = row.label.empty() ? std::to_string(row.index) : row.label;
    if (row.kind == Interaction::kIndependent) {
      if (s_lo >= 0) {
        lower("independent[" + tag + "]:p*s_lo*l_lo+0", p * times(s_lo, l_lo));
      } else {
        lower("independent[" + tag + "]:s_lo*l_hi+(1-p)*s_lo*l_hi",
              times(s_lo, l_hi) + (1 - p) * times(s_lo, l_hi));
      }
      if (s_hi >= 0) {
        upper("independent[" + tag + "]:s_hi*l_hi+(1-p)*s_hi*l_hi",
              times(s_hi, l_hi) + (1 - p) * times(s_hi, l_hi));
      } else {
        upper("independent[" + tag + "]:p*s_hi*l_lo+0", p * times(s_hi, l_lo));
      }
      continue;
    }
    const double v = row.v;
    if (row.cmp == Cmp::kGe) {
      // Satisfied scenarios contribute at least v, the others at least lo_sum.
      const double mix = lo_sum <= v ? p * v + (1 - p) * lo_sum : v;
      const double cell = v >= 0 ? p * v : v + (1 - p) * v;
      lower(std::string("interaction[") + tag + "]:" +
                (v >= 0 ? "p*v+0" : "v+(1-p)*v"),
            cell, cell <= mix + kBoundTol * std::max(1.0, std::fabs(mix)));
    } else if (row.cmp == Cmp::kLe) {
      const double mix = hi_sum >= v ? p * v + (1 - p) * hi_sum : v;
      const double cell = v >= 0 ? v + (1 - p) * v : p * v;
      upper(std::string("interaction[") + tag + "]:" +
                (v >= 0 ? "v+(1-p)*v" : "p*v+0"),
            cell, cell >= mix - kBoundTol * std::max(1.0, std::fabs(mix)));
    }
  }
  if (omega0) lower("omega0", *omega0);
  if (best) upper("best_feasible", *best);

  for (const BoundCandidate& c : r.lower_candidates) {
    if (c.applicable && !std::isnan(c.value)) r.lower = std::max(r.lower, c.value);
  }
  for (const BoundCandidate& c : r.upper_candidates) {
    if (c.applicable && !std::isnan(c.value)) r.upper = std::min(r.upper, c.value);
  }
  return r;
}

}  // namespace

BoundReport compute_bounds(const BoundContext& ctx) {
  if (ctx.probability_objective) {
    // Canonical probability objectives maximize a frequency in [0, 1].
    BoundReport r;
    r.lower_candidates.push_back({"frequency:0", 0.0, true});
    r.upper_candidates.push_back({"frequency:1", 1.0, true});
    r.lower = 0.0;
    r.upper = 1.0;
    if (ctx.best_feasible) {
      r.lower_candidates.push_back({"best_feasible", *ctx.best_feasible, true});
      r.lower = std::max(r.lower, *ctx.best_feasible);
    }
    return r;
  }
  if (ctx.sense == Sense::kMinimize) {
    return min_form_bounds(ctx.s_lo, ctx.s_hi, ctx.l_lo, ctx.l_hi,
                           ctx.interactions, ctx.omega0, ctx.best_feasible);
  }
  auto neg = [](std::optional<double> v) {
    return v ? std::optional<double>(-*v) : std::nullopt;
  };
  BoundReport m = min_form_bounds(-ctx.s_hi, -ctx.s_lo, ctx.l_lo, ctx.l_hi,
                                  ctx.interactions, neg(ctx.omega0),
                                  neg(ctx.best_feasible));
  BoundReport r;
  r.lower = -m.upper;
  r.upper = -m.lower;
  for (BoundCandidate c : m.upper_candidates) {
    c.value = -c.value;
    r.lower_candidates.push_back(c);
  }
  for (BoundCandidate c : m.lower_candidates) {
    c.value = -c.value;
    r.upper_candidates.push_back(c);
  }
  return r;
}

double omega_lower(const BoundContext& ctx) { return compute_bounds(ctx).lower; }
double omega_upper(const BoundContext& ctx) { return compute_bounds(ctx).upper; }

const char* case_name(CertificateCase c) {
  switch (c) {
    case CertificateCase::kMinNonneg: return "min_nonneg";
    case CertificateCase::kMinNeg: return "min_neg";
    case CertificateCase::kMaxNonneg: return "max_nonneg";
    case CertificateCase::kMaxNeg: return "max_neg";
  }
  return "?";
}

EpsilonResult epsilon_q(double omega_q, double lower, double upper,
                        Sense sense) {
  EpsilonResult r;
  if (sense == Sense::kMinimize) {
    if (!(std::isfinite(lower)) || lower == 0.0) {
      throw CaseError("no nonzero finite lower bound for a minimization");
    }
    if (lower > 0) {
      if (!(omega_q > 0)) throw CaseError("objective sign does not match the bound");
      r.epsilon = omega_q / lower - 1.0;
      r.certificate = CertificateCase::kMinNonneg;
      r.guarantee = "omega <= (1 + eps) * optimum";
    } else {
      if (!(omega_q < 0)) throw CaseError("objective sign does not match the bound");
      r.epsilon = lower / omega_q - 1.0;
      r.certificate = CertificateCase::kMinNeg;
      r.guarantee = "optimum >= (1 + eps) * omega";
    }
  } else {
    if (!(std::isfinite(upper)) || upper == 0.0) {
      throw CaseError("no nonzero finite upper bound for a maximization");
    }
    if (upper > 0) {
      if (!(omega_q > 0)) throw CaseError("objective sign does not match the bound");
      r.epsilon = upper / omega_q - 1.0;
      r.certificate = CertificateCase::kMaxNonneg;
      r.guarantee = "optimum <= (1 + eps) * omega";
    } else {
      if (!(omega_q < 0)) throw CaseError("objective sign does not match the bound");
      r.epsilon = omega_q / upper - 1.0;
      r.certificate = CertificateCase::kMaxNeg;
      r.guarantee = "omega >= (1 + eps) * optimum";
    }
  }
  return r;
}

double epsilon_min(double lower, double upper, Sense sense) {
  if (!std::isfinite(lower) || !std::isfinite(upper)) {
    throw CaseError("both objective bounds must be finite");
  }
  if (sense == Sense::kMinimize) {
    if (lower > 0) return upper / lower - 1.0;
    if (lower < 0 && upper < 0) return lower / upper - 1.0;
    throw CaseError("lower bound " + std::to_string(lower) +
                    " admits no certificate case for a minimization");
  }
  if (upper > 0 && lower > 0) return upper / lower - 1.0;
  if (upper < 0) return lower / upper - 1.0;
  throw CaseError("lower bound " + std::to_string(lower) +
                  " admits no certificate case for a maximization");
}

double rho(double k, std::int64_t n, double p) {
  if (n < 0 || k < 0 || k > static_cast<double>(n) || !(p >= 0 && p <= 1)) {
    throw ArgumentError("rho needs 0 <= k <= n and p in [0, 1]");
  }
  const auto top = static_cast<std::int64_t>(std::floor(k));
  if (top >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  const double q = 1.0 - p;
  double term = std::pow(q, static_cast<double>(n));
  double sum = 0.0;
  if (term > 1e-280) {
    const double ratio = p / q;
    for (std::int64_t i = 0; i <= top; ++i) {
      sum += term;
      term *= static_cast<double>(n - i) / static_cast<double>(i + 1) * ratio;
    }
  } else {
    // Log-space sum for large n.
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double ln = std::lgamma(static_cast<double>(n) + 1.0);
    std::vector<double> logs;
    double peak = -kInf;
    for (std::int64_t i = 0; i <= top; ++i) {
      const double di = static_cast<double>(i);
      const double l = ln - std::lgamma(di + 1.0) -
                       std::lgamma(static_cast<double>(n - i) + 1.0) + di * lp +
                       static_cast<double>(n - i) * lq;
      logs.push_back(l);
      peak = std::max(peak, l);
    }
    for (double l : logs) sum += std::exp(l - peak);
    sum = std::exp(peak) * sum;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double hoeffding(std::int64_t n, double q_success, double p_target) {
  if (n < 0 || !(q_success >= 0 && q_success <= 1) ||
      !(p_target >= 0 && p_target <= 1)) {
    throw ArgumentError("hoeffding needs n >= 0 and probabilities in [0, 1]");
  }
  const double d = q_success - p_target;
  return std::exp(-2.0 * static_cast<double>(n) * d * d);
}

bool hoeffding_applies(std::int64_t n, double q_success, double p_target) {
  return static_cast<double>(n) * p_target <= static_cast<double>(n) * q_success;
}

std::int64_t campi_min_scenarios(std::int64_t n, double p, double delta) {
  if (!(p > 0 && p < 1) || !(delta > 0 && delta < 1) || n < 0) {
    throw ArgumentError("campi bound needs p, delta in (0, 1) and N >= 0");
  }
  const double v = (2.0 / (1.0 - p)) * (std::log(1.0 / (1.0 - delta)) +
                                         static_cast<double>(n));
  return static_cast<std::int64_t>(std::ceil(v - 1e-9));
}

}  // namespace spq

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

#include "spq/orchestrate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "spq/errors.hpp"
#include "logging.hpp"
#include "spq/rng.hpp"
#include "spq/saa.hpp"

namespace spq {

namespace {

std::vector<std::string> scenario_attrs(const QueryIR& q, const Relation& rel) {
  std::set<std::string> out;
  for (const Constraint& c : q.constraints) {
    if (!c.is_probabilistic()) continue;
    for (const Term& t : c.inner.terms) {
      if (rel.is_stochastic(t.attr)) out.insert(t.attr);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> mean_attrs(const QueryIR& q, const Relation& rel) {
  std::set<std::string> out;
  auto add = [&](const LinearExpr& e) {
    for (const Term& t : e.terms) {
      if (rel.is_stochastic(t.attr)) out.insert(t.attr);
    }
  };
  for (const Constraint& c : q.constraints) {
    if (!c.is_probabilistic()) add(c.inner);
  }
  if (q.objective.kind == ObjectiveKind::kExpectation ||
      q.objective.kind == ObjectiveKind::kDeterministic) {
    add(q.objective.inner);
  }
  return {out.begin(), out.end()};
}

ScenarioSet make_scenarios(const RunContext& ctx, std::size_t m,
                           std::uint64_t seed, const RunConfig& cfg) {
  GenerateOptions opts;
  opts.attrs = scenario_attrs(ctx.query, *ctx.relation);
  opts.jobs = cfg.jobs;
  if (opts.attrs.empty()) {
    ScenarioSet s;
    s.n = ctx.relation->size();
    s.m = m;
    return s;
  }
  if (cfg.strategy != SummaryStrategy::kInMemory) {
    // Streaming strategies realize values on demand.
    ScenarioSet s;
    s.n = ctx.relation->size();
    s.m = m;
    return s;
  }
  return generate_scenarios(*ctx.relation, m, seed, opts);
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.time_limit_s = cfg.time_limit_s;
  o.node_limit = cfg.node_limit;
  o.default_cap = cfg.default_cap;
  return o;
}

FormulationOptions formulation_options(const RunConfig& cfg) {
  FormulationOptions o;
  o.default_cap = cfg.default_cap;
  return o;
}

std::vector<double> surpluses(const ValidationReport& rep) {
  std::vector<double> out;
  for (const ConstraintReport& c : rep.constraints) out.push_back(c.surplus);
  return out;
}

std::vector<std::size_t> row_indices(const QueryIR& q) {
  std::vector<std::size_t> out;
  for (std::size_t k : q.probabilistic_indices()) {
    if (!q.constraints[k].epigraph) out.push_back(k);
  }
  return out;
}

bool better(double a, double b, Sense sense) {
  return sense == Sense::kMinimize ? a < b : a > b;
}

void record_feasible(RunContext& ctx, double omega) {
  auto& best = ctx.bounds.best_feasible;
  if (!best || better(omega, *best, ctx.query.objective.sense)) best = omega;
}

// Certificate for a validated entry; certificate_possible is cleared when no
// case of the propositions applies.
void certify(const RunContext& ctx, HistoryEntry& e) {
  if (ctx.query.objective.kind == ObjectiveKind::kNone) {
    e.epsilon = EpsilonResult{0.0, CertificateCase::kMinNonneg,
                              "every feasible package is optimal"};
    return;
  }
  if (!ctx.have_bounds) {
    e.certificate_possible = false;
    return;
  }
  const BoundReport b = compute_bounds(ctx.bounds);
  try {
    e.epsilon = epsilon_q(e.report.omega, b.lower, b.upper,
                          ctx.query.objective.sense);
  } catch (const CaseError&) {
    e.certificate_possible = false;
  }
}

TraceEntry trace_of(const HistoryEntry& e, const std::vector<std::size_t>& rows,
                    std::size_t m, std::size_t z, std::size_t it) {
  TraceEntry t;
  t.stage = "csa";
  t.m = m;
  t.z = z;
  t.iteration = it;
  for (std::size_t k : rows) t.alpha.push_back(e.alpha[k]);
  t.x = e.x;
  t.validated = e.validated;
  t.feasible = e.validated && e.report.is_feasible;
  t.surplus = e.surplus;
  t.omega = e.report.omega;
  if (e.epsilon) t.epsilon = e.epsilon->epsilon;
  if (!e.validated) t.note = "csa infeasible; synthetic surplus 1 - p";
  return t;
}

bool terminates(const HistoryEntry& e, double epsilon) {
  if (!e.validated || !e.report.is_feasible) return false;
  if (!e.certificate_possible) return true;
  return e.epsilon && e.epsilon->epsilon <= epsilon + 1e-12;
}

}  // namespace

std::uint64_t optimization_seed(const RunConfig& cfg) {
  return derive_seed(cfg.seed, "optimization");
}

std::uint64_t validation_seed(const RunConfig& cfg) {
  return cfg.validation_seed ? *cfg.validation_seed
                             : derive_seed(cfg.seed, "validation");
}

RunContext prepare_run(const QueryIR& q, const Relation& rel,
                       const RunConfig& cfg) {
  if (cfg.m0 == 0) throw ArgumentError("M0 must be >= 1");
  if (cfg.m_hat == 0) throw ArgumentError("M_hat must be >= 1");
  RunContext ctx;
  ctx.query = q.canonical ? q : canonicalize(q, rel);
  ctx.relation = &rel;
  ctx.validation_seed = validation_seed(cfg);
  ctx.m_hat = cfg.m_hat;
  const std::vector<std::string> attrs = mean_attrs(ctx.query, rel);
  if (attrs.empty()) {
    for (const std::string& a : rel.deterministic_names()) {
      ctx.means[a] = rel.column(a);
    }
  } else {
    ctx.means = mean_columns(rel, cfg.m_hat, ctx.validation_seed, cfg.jobs, attrs);
  }
  ctx.bounds = make_bound_context(ctx.query, {}, {});
  return ctx;
}

void ensure_bounds(RunContext& ctx, const RunConfig& cfg) {
  if (ctx.have_bounds) return;
  const ValueBounds s = scenario_value_bounds(
      ctx.query, *ctx.relation, ctx.m_hat, ctx.validation_seed, cfg.jobs);
  const SizeBounds l = package_size_bounds(ctx.query, *ctx.relation, ctx.means,
                                           formulation_options(cfg));
  BoundContext fresh = make_bound_context(ctx.query, s, l);
  fresh.omega0 = ctx.bounds.omega0;
  fresh.best_feasible = ctx.bounds.best_feasible;
  ctx.bounds = fresh;
  ctx.have_bounds = true;
}

bool History::contains(const Package& x, const std::vector<double>& alpha) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const HistoryEntry& e) {
    return e.x == x && e.alpha == alpha;
  });
}

std::vector<AlphaPoint> History::points(std::size_t pos, std::size_t k) const {
  std::vector<AlphaPoint> out;
  for (const HistoryEntry& e : entries_) {
    out.push_back({e.alpha[k], e.surplus[pos]});
  }
  return out;
}

int History::best(Sense sense) const {
  int best = -1;
  for (std::size_t t = 0; t < entries_.size(); ++t) {
    const HistoryEntry& e = entries_[t];
    if (!e.validated || !e.report.is_feasible) continue;
    if (best < 0 || better(e.report.omega, entries_[best].report.omega, sense)) {
      best = static_cast<int>(t);
    }
  }
  if (best >= 0) return best;
  for (std::size_t t = 0; t < entries_.size(); ++t) {
    const HistoryEntry& e = entries_[t];
    if (!e.validated) continue;
    if (best < 0 ||
        e.report.total_shortfall() < entries_[best].report.total_shortfall()) {
      best = static_cast<int>(t);
    }
  }
  return best;
}

RunResult naive(const RunContext& ctx, const RunConfig& cfg) {
  RunResult r;
  r.algorithm = "naive";
  const QueryIR& q = ctx.query;
  const Relation& rel = *ctx.relation;
  const std::uint64_t opt_seed = optimization_seed(cfg);
  const bool stochastic = !row_indices(q).empty();
  std::size_t m = cfg.m0;
  bool have_x = false;
  while (true) {
    const ScenarioSet s = make_scenarios(ctx, m, opt_seed, cfg);
    const SaaFormulation f =
        formulate_saa(q, rel, s, opt_seed, ctx.means, formulation_options(cfg));
    for (const std::string& w : f.warnings) {
      if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) {
        r.warnings.push_back(w);
      }
    }
    const MilpSolution sol = solve(f.problem, solver_options(cfg));
    TraceEntry t;
    t.stage = "naive";
    t.m = m;
    t.solver_status = status_name(sol.status);
    t.nodes = sol.nodes;
    r.final_m = m;
    if (sol.has_incumbent) {
      const Package x = package_from_solution(f, sol.values);
      const ValidationReport rep = validate(x, q, rel, ctx.means, ctx.m_hat,
                                            ctx.validation_seed, cfg.jobs);
      t.x = x;
      t.validated = true;
      t.feasible = rep.is_feasible;
      t.surplus = surpluses(rep);
      t.omega = rep.omega;
      r.trace.push_back(t);
      SPQ_LOG(debug, "naive M={} status={} feasible={}", m, t.solver_status,
              rep.is_feasible);
      if (!have_x || rep.is_feasible ||
          rep.total_shortfall() < r.report.total_shortfall()) {
        r.package = x;
        r.report = rep;
        have_x = true;
      }
      if (rep.is_feasible) {
        r.success = true;
        return r;
      }
    } else {
      t.note = "SAA problem has no solution";
      r.trace.push_back(t);
    }
    if (cfg.fixed_m || !stochastic) break;
    m += cfg.m_increment;
    if (m > cfg.m_cap) break;
  }
  r.failure = have_x ? fmt::format("no validation-feasible package up to M={}",
                                   r.final_m)
                     : fmt::format("no SAA solution up to M={}", r.final_m);
  return r;
}

CsaSolveResult csa_solve(RunContext& ctx, const RunConfig& cfg,
                         const CsaSolveInput& in) {
  const QueryIR& q = ctx.query;
  const std::vector<std::size_t> rows = row_indices(q);
  const Sense sense = q.objective.sense;
  const std::uint64_t opt_seed = optimization_seed(cfg);

  CsaInput csa;
  csa.query = &q;
  csa.relation = ctx.relation;
  csa.means = &ctx.means;
  csa.m = in.m;
  csa.z = in.z;
  csa.scenario_seed = opt_seed;
  csa.partition_seed = derive_seed(opt_seed, "partition", in.m * 1000003 + in.z);
  csa.scenarios = in.scenarios;
  csa.strategy = cfg.strategy;
  csa.reorder = cfg.reorder;
  csa.formulation = formulation_options(cfg);
  csa.jobs = cfg.jobs;

  CsaSolveResult res;
  History h;
  std::vector<double> alpha(q.constraints.size(), 0.0);
  Package x = in.x0;
  bool synthetic = false;
  std::string status = "x0";
  std::size_t nodes = 0;

  auto solve_at = [&](const std::vector<double>& a, const Package& prev,
                      const KeySets& keep) {
    const CsaFormulation f = formulate_csa(csa, a, prev, keep);
    const MilpSolution sol = solve(f.saa.problem, solver_options(cfg));
    status = status_name(sol.status);
    nodes = sol.nodes;
    if (sol.has_incumbent) {
      x = package_from_solution(f.saa, sol.values);
      synthetic = false;
    } else {
      synthetic = true;
    }
  };

  if (in.x0_unbounded) {
    // Skip the unbounded x0 and start at the smallest positive level.
    for (std::size_t k : rows) alpha[k] = alpha_from_level(1, in.z, in.m);
    solve_at(alpha, Package{}, {});
  }

  for (std::size_t it = 0; it < cfg.csa_iteration_cap; ++it) {
    if (h.contains(x, alpha)) {
      res.cycle = true;
      break;
    }
    HistoryEntry e;
    e.x = x;
    e.alpha = alpha;
    if (!synthetic) {
      e.report = validate(x, q, *ctx.relation, ctx.means, ctx.m_hat,
                          ctx.validation_seed, cfg.jobs);
      e.validated = true;
      e.surplus = surpluses(e.report);
      if (e.report.is_feasible) record_feasible(ctx, e.report.omega);
      certify(ctx, e);
    } else {
      for (std::size_t k : rows) e.surplus.push_back(1.0 - q.constraints[k].prob->value());
    }
    TraceEntry t = trace_of(e, rows, in.m, in.z, it);
    t.solver_status = status;
    t.nodes = nodes;
    res.trace.push_back(t);
    res.iterations = it + 1;
    SPQ_LOG(debug, "csa M={} Z={} it={} feasible={} omega={}", in.m, in.z, it,
            t.feasible, t.omega);
    const bool done = terminates(e, cfg.epsilon);
    h.add(std::move(e));
    if (done) {
      res.terminated = true;
      res.best = h.entries().back();
      return res;
    }
    std::vector<double> next = alpha;
    for (std::size_t pos = 0; pos < rows.size(); ++pos) {
      const std::size_t k = rows[pos];
      next[k] = guess_alpha(h.points(pos, k), in.z, in.m).alpha;
    }
    KeySets keep;
    const std::vector<TupleId> support = x.support();
    for (std::size_t k : rows) {
      if (next[k] < alpha[k]) keep[k] = std::set<TupleId>(support.begin(), support.end());
    }
    solve_at(next, x, keep);
    alpha = next;
  }
  const int b = h.best(sense);
  res.best = b >= 0 ? h.entries()[static_cast<std::size_t>(b)] : h.entries().back();
  return res;
}

RunResult summary_search(RunContext& ctx, const RunConfig& cfg) {
  RunResult r;
  r.algorithm = "summarysearch";
  const QueryIR& q = ctx.query;
  const Relation& rel = *ctx.relation;
  const std::uint64_t opt_seed = optimization_seed(cfg);
  const bool probability_objective = q.objective.kind == ObjectiveKind::kProbability;
  ensure_bounds(ctx, cfg);

  std::size_t m = cfg.m0;
  std::size_t z = cfg.fixed_m ? cfg.z0 : 1;
  if (z < 1 || z > m) throw ArgumentError("need 1 <= Z <= M");

  Package x0;
  bool x0_unbounded = false;
  auto solve_x0 = [&](const ScenarioSet& s) {
    const SaaFormulation f =
        formulate_base(q, rel, s, opt_seed, ctx.means, formulation_options(cfg));
    for (const std::string& w : f.warnings) {
      if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) {
        r.warnings.push_back(w);
      }
    }
    const MilpSolution sol = solve(f.problem, solver_options(cfg));
    TraceEntry t;
    t.stage = "x0";
    t.m = m;
    t.solver_status = status_name(sol.status);
    t.nodes = sol.nodes;
    if (!sol.has_incumbent) {
      t.note = "problem without probabilistic rows has no solution";
      r.trace.push_back(t);
      return false;
    }
    x0 = package_from_solution(f, sol.values);
    x0_unbounded = sol.status == SolveStatus::kUnbounded;
    t.x = x0;
    r.trace.push_back(t);
    if (sol.status == SolveStatus::kOptimal && !probability_objective &&
        q.objective.kind != ObjectiveKind::kNone) {
      const ValidationReport rep0 = validate(x0, q, rel, ctx.means, ctx.m_hat,
                                             ctx.validation_seed, cfg.jobs);
      // The relaxation optimum bounds the constrained optimum.
      if (rep0.reason.empty()) ctx.bounds.omega0 = rep0.omega;
    }
    return true;
  };

  ScenarioSet s = make_scenarios(ctx, m, opt_seed, cfg);
  if (!solve_x0(s)) {
    r.failure = "the deterministic part of the query is infeasible";
    return r;
  }
  {
    const BoundReport b = compute_bounds(ctx.bounds);
    r.bounds = b;
    try {
      r.epsilon_min = epsilon_min(b.lower, b.upper, q.objective.sense);
    } catch (const CaseError& e) {
      r.warnings.push_back(std::string("no epsilon_min: ") + e.what());
    }
    if (r.epsilon_min && cfg.epsilon < *r.epsilon_min - 1e-12) {
      throw ArgumentError(fmt::format(
          "epsilon {} is below the smallest certifiable error epsilon_min = {}",
          cfg.epsilon, *r.epsilon_min));
    }
  }

  std::optional<HistoryEntry> best_feasible;
  std::optional<HistoryEntry> best_any;
  const Sense sense = q.objective.sense;
  std::size_t last_m = m;
  while (true) {
    if (m != last_m) {
      s = make_scenarios(ctx, m, opt_seed, cfg);
      if (probability_objective && !solve_x0(s)) break;
      last_m = m;
    }
    CsaSolveInput in;
    in.x0 = x0;
    in.x0_unbounded = x0_unbounded;
    in.m = m;
    in.z = z;
    in.scenarios = &s;
    CsaSolveResult res = csa_solve(ctx, cfg, in);
    ++r.csa_calls;
    r.final_m = m;
    r.final_z = z;
    r.trace.insert(r.trace.end(), res.trace.begin(), res.trace.end());
    const HistoryEntry& e = res.best;
    const bool feasible = e.validated && e.report.is_feasible;
    if (feasible && (!best_feasible ||
                     better(e.report.omega, best_feasible->report.omega, sense))) {
      best_feasible = e;
    }
    if (e.validated && (!best_any || e.report.total_shortfall() <
                                         best_any->report.total_shortfall())) {
      best_any = e;
    }
    if (res.terminated) {
      r.success = true;
      r.certified = e.epsilon && e.epsilon->epsilon <= cfg.epsilon + 1e-12;
      r.package = e.x;
      r.report = e.report;
      r.certificate = e.epsilon;
      r.bounds = compute_bounds(ctx.bounds);
      return r;
    }
    if (cfg.fixed_m || r.csa_calls >= cfg.csa_call_cap) break;
    if (feasible && z < m) {
      z += std::min(cfg.z_increment, m - z);
    } else {
      m += cfg.m_increment;
      if (m > cfg.m_cap) break;
    }
  }
  r.bounds = compute_bounds(ctx.bounds);
  if (best_feasible) {
    r.success = true;
    r.package = best_feasible->x;
    r.report = best_feasible->report;
    r.certificate = best_feasible->epsilon;
    r.certified = best_feasible->epsilon &&
                  best_feasible->epsilon->epsilon <= cfg.epsilon + 1e-12;
    return r;
  }
  if (best_any) {
    r.package = best_any->x;
    r.report = best_any->report;
  }
  r.failure = fmt::format("no validation-feasible package up to M={}", r.final_m);
  return r;
}

}  // namespace spq

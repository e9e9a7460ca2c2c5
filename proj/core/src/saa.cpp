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

#include "spq/saa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "spq/errors.hpp"

namespace spq {

namespace {

std::string var_token(const std::string& label) {
  std::string out;
  for (char c : label) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  }
  return out;
}

double default_hi(const QueryIR& q, const FormulationOptions& opts,
                  bool* capped) {
  double hi = kInf;
  if (q.repeat_limit) hi = static_cast<double>(*q.repeat_limit + 1);
  auto [lo, count_hi] = q.count_bounds();
  (void)lo;
  if (count_hi) hi = std::min(hi, static_cast<double>(std::max<std::int64_t>(0, *count_hi)));
  *capped = !std::isfinite(hi);
  return *capped ? opts.default_cap : hi;
}

SparseRow sparse(const std::vector<double>& dense,
                 const std::vector<int>& x_var) {
  SparseRow row;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) row.emplace_back(x_var[i], dense[i]);
  }
  return row;
}

std::vector<std::vector<double>> scenario_columns(const Relation& rel,
                                                  const LinearExpr& expr,
                                                  const ScenarioSet& set,
                                                  std::uint64_t seed) {
  ExprSampler sampler(rel, expr, seed, &set);
  std::vector<std::vector<double>> cols;
  cols.reserve(set.m);
  for (std::size_t j = 0; j < set.m; ++j) cols.push_back(sampler.column(j));
  return cols;
}

}  // namespace

std::vector<double> mean_coefficients(const LinearExpr& expr,
                                      const Relation& rel,
                                      const MeanColumns& means) {
  std::vector<double> out(rel.size(), expr.constant);
  for (const Term& t : expr.terms) {
    const std::vector<double>* col = nullptr;
    if (auto it = means.find(t.attr); it != means.end()) {
      col = &it->second;
    } else if (rel.is_deterministic(t.attr)) {
      col = &rel.column(t.attr);
    } else {
      throw AttributeError("no mean column for attribute '" + t.attr + "'");
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.coef * (*col)[i];
  }
  return out;
}

SaaFormulation formulate_base(const QueryIR& q_in, const Relation& rel,
                              const ScenarioSet& scenarios,
                              std::uint64_t scenario_seed,
                              const MeanColumns& means,
                              const FormulationOptions& opts) {
  const QueryIR q = q_in.canonical ? q_in : canonicalize(q_in, rel);
  SaaFormulation f;
  MilpProblem& p = f.problem;
  p.name = "spq";
  bool capped = false;
  const double hi = default_hi(q, opts, &capped);
  if (capped) {
    f.warnings.push_back(
        "no repeat limit or COUNT upper bound; multiplicities capped at " +
        std::to_string(static_cast<long long>(opts.default_cap)));
  }
  const std::size_t n = rel.size();
  for (TupleId i = 1; i <= n; ++i) {
    MilpVar v;
    v.name = "x" + std::to_string(i);
    v.lo = 0.0;
    v.hi = q.is_excluded(i) ? 0.0 : hi;
    v.capped = capped && !q.is_excluded(i);
    f.x_var.push_back(p.add_var(v));
  }

  const Objective& obj = q.objective;
  p.sense = obj.sense;
  if (obj.kind == ObjectiveKind::kExpectation ||
      obj.kind == ObjectiveKind::kDeterministic) {
    const std::vector<double> c = mean_coefficients(obj.inner, rel, means);
    for (std::size_t i = 0; i < n; ++i) p.objective[f.x_var[i]] = c[i];
  } else if (obj.kind == ObjectiveKind::kNone) {
    p.sense = Sense::kMinimize;
  }

  for (std::size_t k = 0; k < q.constraints.size(); ++k) {
    const Constraint& c = q.constraints[k];
    if (c.kind == ConstraintKind::kProbabilistic) {
      if (!c.epigraph) continue;
      // Epigraph of a probability objective: maximize satisfied scenarios.
      const auto cols = scenario_columns(rel, c.inner, scenarios, scenario_seed);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        MilpVar y;
        y.name = "y_" + var_token(c.label) + "_" + std::to_string(j + 1);
        y.lo = 0.0;
        y.hi = 1.0;
        y.role = VarRole::kIndicator;
        const int yi = p.add_var(y, 1.0);
        f.indicator[{k, j}] = yi;
        p.indicators.push_back(
            {y.name, yi, sparse(cols[j], f.x_var), c.cmp, c.rhs});
      }
      p.sense = Sense::kMaximize;
      continue;
    }
    const std::vector<double> coefs = mean_coefficients(c.inner, rel, means);
    LinearRow row;
    row.name = var_token(c.label.empty() ? "r" + std::to_string(k + 1) : c.label);
    row.coefs = sparse(coefs, f.x_var);
    row.cmp = c.cmp;
    row.rhs = c.rhs;
    p.add_row(std::move(row));
  }
  return f;
}

void add_probabilistic_rows(SaaFormulation& f, const QueryIR& q,
                            std::size_t k,
                            const std::vector<std::vector<double>>& columns) {
  const Constraint& c = q.constraints.at(k);
  if (!c.is_probabilistic() || !c.prob) {
    throw ArgumentError("constraint " + std::to_string(k) +
                        " is not a probabilistic row");
  }
  MilpProblem& p = f.problem;
  const std::string token = var_token(c.label);
  LinearRow count;
  count.name = "count_" + token;
  count.cmp = Cmp::kGe;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    MilpVar y;
    y.name = "y_" + token + "_" + std::to_string(j + 1);
    y.lo = 0.0;
    y.hi = 1.0;
    y.role = VarRole::kIndicator;
    const int yi = p.add_var(y);
    f.indicator[{k, j}] = yi;
    p.indicators.push_back(
        {y.name, yi, sparse(columns[j], f.x_var), c.cmp, c.rhs});
    count.coefs.emplace_back(yi, 1.0);
  }
  const auto need = c.prob->ceil_times(static_cast<std::int64_t>(columns.size()));
  if (need > static_cast<std::int64_t>(columns.size())) {
    f.infeasible_by_construction = true;
  }
  count.rhs = static_cast<double>(need);
  f.counting_row[k] = static_cast<int>(p.rows.size());
  p.add_row(std::move(count));
}

SaaFormulation formulate_saa(const QueryIR& q_in, const Relation& rel,
                             const ScenarioSet& scenarios,
                             std::uint64_t scenario_seed,
                             const MeanColumns& means,
                             const FormulationOptions& opts) {
  if (scenarios.m == 0) throw ArgumentError("SAA needs M >= 1 scenarios");
  const QueryIR q = q_in.canonical ? q_in : canonicalize(q_in, rel);
  SaaFormulation f =
      formulate_base(q, rel, scenarios, scenario_seed, means, opts);
  for (std::size_t k : q.probabilistic_indices()) {
    const Constraint& c = q.constraints[k];
    if (c.epigraph) continue;
    add_probabilistic_rows(
        f, q, k, scenario_columns(rel, c.inner, scenarios, scenario_seed));
  }
  return f;
}

std::size_t coefficient_count(const SaaFormulation& f) {
  return f.problem.nonzeros();
}

Package package_from_solution(const SaaFormulation& f,
                              const std::vector<double>& values) {
  Package x;
  for (std::size_t i = 0; i < f.x_var.size(); ++i) {
    const double v = values.at(static_cast<std::size_t>(f.x_var[i]));
    x.set(i + 1, static_cast<std::int64_t>(std::llround(v)));
  }
  return x;
}

}  // namespace spq

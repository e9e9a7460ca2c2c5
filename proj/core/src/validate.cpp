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

#include "spq/validate.hpp"

#include <algorithm>
#include <optional>

#include "spq/errors.hpp"
#include "spq/parallel.hpp"

namespace spq {

namespace {

constexpr std::size_t kChunk = 4096;

struct Partial {
  std::vector<std::size_t> satisfied;
  std::vector<double> gamma;
  double objective = 0.0;
  std::size_t epigraph_hits = 0;
};

}  // namespace

bool ValidationReport::all_surplus_nonnegative() const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [](const ConstraintReport& c) { return c.surplus >= 0.0; });
}

double ValidationReport::total_shortfall() const {
  double s = 0.0;
  for (const ConstraintReport& c : constraints) s += std::max(0.0, -c.surplus);
  return s;
}

ValidationReport validate(const Package& x, const QueryIR& q_in,
                          const Relation& rel, const MeanColumns& means,
                          std::size_t m_hat, std::uint64_t seed,
                          std::size_t jobs) {
  if (m_hat == 0) throw ArgumentError("M_hat must be >= 1");
  const QueryIR q = q_in.canonical ? q_in : canonicalize(q_in, rel);
  ValidationReport rep;
  rep.m_hat = m_hat;
  for (std::size_t k : q.probabilistic_indices()) {
    const Constraint& c = q.constraints[k];
    if (c.epigraph) continue;
    ConstraintReport cr;
    cr.index = k;
    cr.label = c.label;
    cr.p = c.prob->value();
    cr.required = c.prob->ceil_times(static_cast<std::int64_t>(m_hat));
    rep.constraints.push_back(cr);
  }
  if (!satisfies_deterministic(x, q, rel, means, &rep.reason)) {
    rep.is_feasible = false;
    for (ConstraintReport& cr : rep.constraints) cr.surplus = -cr.p;
    return rep;
  }

  const std::vector<TupleId> support = x.support();
  std::vector<double> mult;
  for (TupleId i : support) mult.push_back(static_cast<double>(x.get(i)));
  auto package_value = [&](const ExprSampler& s, std::size_t j) {
    double v = 0.0;
    for (std::size_t t = 0; t < support.size(); ++t) {
      v += s.value(support[t], j) * mult[t];
    }
    return v;
  };

  std::vector<ExprSampler> samplers;
  for (const ConstraintReport& cr : rep.constraints) {
    samplers.emplace_back(rel, q.constraints[cr.index].inner, seed);
  }
  const Objective& obj = q.objective;
  const Constraint* epigraph = nullptr;
  for (const Constraint& c : q.constraints) {
    if (c.epigraph) epigraph = &c;
  }
  const bool expectation = obj.kind == ObjectiveKind::kExpectation && !obj.point_mass;
  const ExprSampler obj_sampler(rel, obj.inner, seed);
  std::optional<ExprSampler> epi_sampler;
  if (epigraph != nullptr) epi_sampler.emplace(rel, epigraph->inner, seed);

  const std::size_t chunks = (m_hat + kChunk - 1) / kChunk;
  std::vector<Partial> partials(chunks);
  for_each_chunk(m_hat, kChunk, jobs, [&](std::size_t c, std::size_t lo,
                                          std::size_t hi) {
    Partial& part = partials[c];
    part.satisfied.assign(samplers.size(), 0);
    part.gamma.assign(samplers.size(), 0.0);
    for (std::size_t j = lo; j < hi; ++j) {
      for (std::size_t k = 0; k < samplers.size(); ++k) {
        const Constraint& con = q.constraints[rep.constraints[k].index];
        const double v = package_value(samplers[k], j);
        if (holds(v, con.cmp, con.rhs)) {
          ++part.satisfied[k];
          part.gamma[k] += v;
        }
      }
      if (expectation) part.objective += package_value(obj_sampler, j);
      if (epi_sampler) {
        const double v = package_value(*epi_sampler, j);
        if (holds(v, epigraph->cmp, epigraph->rhs)) ++part.epigraph_hits;
      }
    }
  });

  double objective_sum = 0.0;
  std::size_t hits = 0;
  for (const Partial& part : partials) {
    for (std::size_t k = 0; k < samplers.size(); ++k) {
      rep.constraints[k].satisfied += part.satisfied[k];
      rep.constraints[k].gamma += part.gamma[k];
    }
    objective_sum += part.objective;
    hits += part.epigraph_hits;
  }
  const double inv = 1.0 / static_cast<double>(m_hat);
  rep.is_feasible = true;
  for (ConstraintReport& cr : rep.constraints) {
    cr.gamma *= inv;
    cr.surplus = static_cast<double>(cr.satisfied) * inv - cr.p;
    if (static_cast<std::int64_t>(cr.satisfied) < cr.required) rep.is_feasible = false;
  }
  switch (obj.kind) {
    case ObjectiveKind::kExpectation:
    case ObjectiveKind::kDeterministic:
      if (expectation) {
        rep.omega = objective_sum * inv;
      } else {
        double v = 0.0;
        for (std::size_t t = 0; t < support.size(); ++t) {
          v += obj_sampler.deterministic_part(support[t]) * mult[t];
        }
        rep.omega = v;
      }
      break;
    case ObjectiveKind::kProbability:
      rep.omega = static_cast<double>(hits) * inv;
      break;
    case ObjectiveKind::kNone:
      rep.omega = 0.0;
      break;
  }
  rep.omega_user = obj.complemented ? 1.0 - rep.omega : rep.omega;
  rep.streamed = true;
  return rep;
}

}  // namespace spq

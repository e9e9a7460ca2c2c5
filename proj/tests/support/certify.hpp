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


// Certificate and bound checks against exhaustive package enumeration on
// tiny random instances.

#ifndef SPQ_TESTS_CERTIFY_HPP_
#define SPQ_TESTS_CERTIFY_HPP_

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "instances.hpp"
#include "spq/bounds.hpp"
#include "spq/errors.hpp"
#include "spq/orchestrate.hpp"
#include "spq/validate.hpp"

namespace spq::testing {

struct CertifyStats {
  int instances = 0;
  int with_optimum = 0;
  int runs = 0;
  int certified = 0;
  int rejected = 0;  // epsilon below epsilon_min
  int certificate_violations = 0;
  int bound_checks = 0;
  int bound_violations = 0;
  int lemma_checks = 0;
  int lemma_violations = 0;
  std::vector<std::string> failures;
};

// Every package with 1..max_size tuples (multiplicities allowed) over n ids.
inline void for_each_package(std::size_t n, int max_size,
                             const std::function<void(const Package&)>& fn) {
  std::vector<std::int64_t> counts(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      if (left < max_size) fn(Package::from_dense(counts));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
    counts[i] = 0;
  };
  rec(0, max_size);
}

struct Oracle {
  std::optional<double> omega_hat;
  Package best;
};

inline Oracle enumerate_validation_optimum(const RunContext& ctx, int max_size) {
  Oracle o;
  const Sense sense = ctx.query.objective.sense;
  for_each_package(ctx.relation->size(), max_size, [&](const Package& x) {
    ValidationReport r = validate(x, ctx.query, *ctx.relation, ctx.means,
                                  ctx.m_hat, ctx.validation_seed);
    if (!r.is_feasible) return;
    if (!o.omega_hat || (sense == Sense::kMaximize ? r.omega > *o.omega_hat
                                                   : r.omega < *o.omega_hat)) {
      o.omega_hat = r.omega;
      o.best = x;
    }
  });
  return o;
}

// Inequality promised by each certificate case.
inline bool certificate_holds(const EpsilonResult& e, double omega_q,
                              double omega_hat) {
  const double tol = 1e-9 * std::max({1.0, std::fabs(omega_q), std::fabs(omega_hat)});
  const double k = 1.0 + e.epsilon;
  switch (e.certificate) {
    case CertificateCase::kMinNonneg: return omega_q <= k * omega_hat + tol;
    case CertificateCase::kMinNeg: return omega_hat >= k * omega_q - tol;
    case CertificateCase::kMaxNonneg: return omega_hat <= k * omega_q + tol;
    case CertificateCase::kMaxNeg: return omega_q >= k * omega_hat - tol;
  }
  return false;
}

inline CertifyStats run_certification(int count, std::uint64_t seed,
                                      std::size_t m_hat) {
  CertifyStats st;
  std::mt19937_64 rng(seed);
  const double epsilons[] = {0.1, 0.5, 2.0, 20.0};
  const int max_size = 4;
  for (int t = 0; t < count; ++t) {
    Instance inst = random_instance(rng, 6, max_size, true);
    QueryIR q = canonicalize(compile_query(inst.query, inst.relation), inst.relation);
    ++st.instances;
    RunConfig cfg;
    cfg.m0 = 10;
    cfg.m_increment = 10;
    cfg.m_cap = 30;
    cfg.m_hat = m_hat;
    cfg.seed = 1000 + static_cast<std::uint64_t>(t);
    cfg.epsilon = epsilons[t % 4];
    cfg.csa_iteration_cap = 20;
    cfg.csa_call_cap = 20;
    RunContext ctx = prepare_run(q, inst.relation, cfg);
    const Oracle oracle = enumerate_validation_optimum(ctx, max_size);
    if (oracle.omega_hat) ++st.with_optimum;
    RunResult r;
    try {
      r = summary_search(ctx, cfg);
    } catch (const ArgumentError&) {
      ++st.rejected;
      continue;
    }
    ++st.runs;
    const std::string tag = fmt::format("instance {} ({})", t, inst.query);
    if (r.certified) {
      ++st.certified;
      if (!oracle.omega_hat || !r.certificate ||
          !certificate_holds(*r.certificate, r.report.omega, *oracle.omega_hat)) {
        ++st.certificate_violations;
        st.failures.push_back(fmt::format(
            "{}: certified omega {} eps {} against optimum {}", tag, r.report.omega,
            r.certificate ? r.certificate->epsilon : -1.0,
            oracle.omega_hat ? *oracle.omega_hat : NAN));
      }
    }
    if (!oracle.omega_hat || !r.bounds) continue;
    const double w = *oracle.omega_hat;
    const double tol = 1e-9 * std::max(1.0, std::fabs(w));
    for (const BoundCandidate& c : r.bounds->lower_candidates) {
      if (!c.applicable) continue;
      ++st.bound_checks;
      if (c.value > w + tol) {
        ++st.bound_violations;
        st.failures.push_back(fmt::format("{}: lower {} = {} above {}", tag, c.source, c.value, w));
      }
    }
    for (const BoundCandidate& c : r.bounds->upper_candidates) {
      if (!c.applicable) continue;
      ++st.bound_checks;
      if (c.value < w - tol) {
        ++st.bound_violations;
        st.failures.push_back(fmt::format("{}: upper {} = {} below {}", tag, c.source, c.value, w));
      }
    }
    // Lemma checks on counteracted rows written in minimization form.
    for (const InteractionInfo& info : ctx.bounds.interactions) {
      if (info.kind != Interaction::kCounteracted || info.v < 0) continue;
      const bool max = ctx.query.objective.sense == Sense::kMaximize;
      if (max) continue;  // the lemmas are stated for the minimization form
      ValidationReport rep = validate(oracle.best, ctx.query, inst.relation,
                                      ctx.means, ctx.m_hat, ctx.validation_seed);
      for (const ConstraintReport& cr : rep.constraints) {
        if (cr.index != info.index) continue;
        ++st.lemma_checks;
        const double bound = cr.gamma + (1 - info.p) * info.v;
        if (rep.omega > bound + tol) {
          ++st.lemma_violations;
          st.failures.push_back(fmt::format("{}: omega {} above gamma bound {}", tag, rep.omega, bound));
        }
        if (ctx.bounds.s_lo >= 0) {
          ++st.lemma_checks;
          if (w < info.p * info.v - tol) {
            ++st.lemma_violations;
            st.failures.push_back(fmt::format("{}: optimum {} below p*v", tag, w));
          }
        }
      }
    }
  }
  return st;
}

}  // namespace spq::testing

#endif  // SPQ_TESTS_CERTIFY_HPP_

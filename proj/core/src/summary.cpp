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

#include "spq/summary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spq/errors.hpp"
#include "spq/parallel.hpp"
#include "spq/rng.hpp"

namespace spq {

Partitioning partition_scenarios(std::size_t m, std::size_t z,
                                 std::uint64_t seed) {
  if (z < 1 || z > m) {
    throw ArgumentError("need 1 <= Z <= M, got Z=" + std::to_string(z) +
                        ", M=" + std::to_string(m));
  }
  std::vector<std::size_t> ids(m);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  KeyedStream rng(seed, m, z);
  for (std::size_t i = m; i > 1; --i) {
    std::swap(ids[i - 1], ids[rng.next_u64() % i]);
  }
  Partitioning out;
  out.blocks.resize(z);
  const std::size_t base = m / z;
  const std::size_t extra = m % z;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < z; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    out.blocks[b].assign(ids.begin() + static_cast<std::ptrdiff_t>(pos),
                         ids.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(out.blocks[b].begin(), out.blocks[b].end());
    pos += size;
  }
  return out;
}

std::vector<std::size_t> select_gz(
    std::span<const std::size_t> block, std::size_t n, const Package& prev_x,
    const std::function<double(std::size_t j)>& score, Cmp cmp) {
  if (n < 1 || n > block.size()) {
    throw ArgumentError("G_z size must lie in [1, |partition|]");
  }
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(block.size());
  for (std::size_t j : block) {
    scored.emplace_back(prev_x.empty() ? 0.0 : score(j), j);
  }
  const bool descending = cmp != Cmp::kLe;
  std::stable_sort(scored.begin(), scored.end(),
                   [&](const auto& a, const auto& b) {
                     if (a.first != b.first) {
                       return descending ? a.first > b.first
                                         : a.first < b.first;
                     }
                     return a.second < b.second;
                   });
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) out.push_back(scored[t].second);
  return out;
}

std::vector<std::size_t> select_gz(std::span<const std::size_t> block,
                                   std::size_t n, const Package& prev_x,
                                   const ColumnFn& column, Cmp cmp) {
  return select_gz(
      block, n, prev_x,
      std::function<double(std::size_t)>([&](std::size_t j) {
        const std::vector<double> col = column(j);
        return inner_sum(prev_x, col);
      }),
      cmp);
}

Summary build_alpha_summary(const std::vector<std::vector<double>>& g,
                            Cmp direction, const std::set<TupleId>& keep_set) {
  if (g.empty()) throw ArgumentError("a summary needs at least one scenario");
  const std::size_t n = g.front().size();
  Summary s;
  s.direction = direction;
  s.keep_set.assign(keep_set.begin(), keep_set.end());
  s.values.resize(n);
  const bool take_min = direction != Cmp::kLe;
  for (std::size_t i = 0; i < n; ++i) {
    const bool flip = keep_set.count(i + 1) > 0;
    const bool use_min = take_min != flip;
    double v = g.front()[i];
    for (std::size_t t = 1; t < g.size(); ++t) {
      v = use_min ? std::min(v, g[t][i]) : std::max(v, g[t][i]);
    }
    s.values[i] = v;
  }
  return s;
}

const char* strategy_name(SummaryStrategy s) {
  switch (s) {
    case SummaryStrategy::kInMemory: return "in_memory";
    case SummaryStrategy::kTupleWise: return "tuple_wise";
    case SummaryStrategy::kScenarioWise: return "scenario_wise";
  }
  return "?";
}

SummaryStrategy strategy_from_name(const std::string& name) {
  if (name == "in_memory") return SummaryStrategy::kInMemory;
  if (name == "tuple_wise") return SummaryStrategy::kTupleWise;
  if (name == "scenario_wise") return SummaryStrategy::kScenarioWise;
  throw ArgumentError("unknown summary strategy '" + name +
                      "' (in_memory, tuple_wise or scenario_wise)");
}

std::size_t alpha_level(double alpha, std::size_t z, std::size_t m) {
  if (z == 0 || m == 0 || z > m) throw ArgumentError("need 1 <= Z <= M");
  const std::size_t top = (m + z - 1) / z;
  if (alpha == 0.0) return 0;
  if (alpha >= 1.0 - 1e-12 && alpha <= 1.0 + 1e-12) return top;
  const double q = alpha * static_cast<double>(m) / static_cast<double>(z);
  const double r = std::round(q);
  if (r < 1 || r > static_cast<double>(top) || std::fabs(q - r) > 1e-9 * std::max(1.0, q)) {
    throw ArgumentError("alpha " + std::to_string(alpha) +
                        " is not on the grid of multiples of Z/M");
  }
  return static_cast<std::size_t>(r);
}

double alpha_from_level(std::size_t level, std::size_t z, std::size_t m) {
  return std::min(1.0, static_cast<double>(level * z) / static_cast<double>(m));
}

std::size_t summary_size(double alpha, std::size_t z, std::size_t m,
                         std::size_t block) {
  const std::size_t level = alpha_level(alpha, z, m);
  const std::size_t num = level * z * block;
  return std::min(block, (num + m - 1) / m);
}

namespace {

ScenarioSet empty_cache(std::size_t n, std::size_t m) {
  ScenarioSet s;
  s.n = n;
  s.m = m;
  return s;
}

}  // namespace

std::vector<Summary> build_summaries(const CsaInput& in, std::size_t k,
                                     double alpha, const Package& prev_x,
                                     const std::set<TupleId>& keep_set) {
  const QueryIR& q = *in.query;
  const Relation& rel = *in.relation;
  const Constraint& c = q.constraints.at(k);
  const ScenarioSet* cache =
      in.strategy == SummaryStrategy::kInMemory ? in.scenarios : nullptr;
  if (in.strategy == SummaryStrategy::kInMemory && cache == nullptr) {
    throw ArgumentError("in_memory summaries need a scenario set");
  }
  const ExprSampler sampler(rel, c.inner, in.scenario_seed, cache);
  const Partitioning part = partition_scenarios(in.m, in.z, in.partition_seed);
  const std::size_t n = rel.size();
  const std::vector<TupleId> support = prev_x.support();
  auto score = [&](std::size_t j) {
    double s = 0.0;
    for (TupleId i : support) {
      s += sampler.value(i, j) * static_cast<double>(prev_x.get(i));
    }
    return s;
  };

  std::vector<Summary> out(in.z);
  for (std::size_t b = 0; b < in.z; ++b) {
    const auto& block = part.blocks[b];
    const std::size_t size = summary_size(alpha, in.z, in.m, block.size());
    std::vector<std::size_t> g;
    if (in.reorder) {
      g = select_gz(block, size, prev_x, std::function<double(std::size_t)>(score), c.cmp);
    } else {
      g.assign(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(size));
    }
    Summary& s = out[b];
    if (in.strategy == SummaryStrategy::kTupleWise) {
      // Outer loop over tuples: O(N) memory regardless of |G|.
      s.values.assign(n, 0.0);
      const bool take_min = c.cmp != Cmp::kLe;
      for_each_chunk(n, 256, in.jobs, [&](std::size_t, std::size_t lo,
                                           std::size_t hi) {
        for (std::size_t i0 = lo; i0 < hi; ++i0) {
          const TupleId i = i0 + 1;
          const bool use_min = take_min != (keep_set.count(i) > 0);
          double v = sampler.value(i, g.front());
          for (std::size_t t = 1; t < g.size(); ++t) {
            const double w = sampler.value(i, g[t]);
            v = use_min ? std::min(v, w) : std::max(v, w);
          }
          s.values[i0] = v;
        }
      });
      s.direction = c.cmp;
      s.keep_set.assign(keep_set.begin(), keep_set.end());
    } else if (in.strategy == SummaryStrategy::kScenarioWise) {
      // Outer loop over scenarios: one running column.
      std::vector<std::vector<double>> running{sampler.column(g.front())};
      for (std::size_t t = 1; t < g.size(); ++t) {
        running.push_back(sampler.column(g[t]));
        running = {build_alpha_summary(running, c.cmp, keep_set).values};
      }
      s = build_alpha_summary(running, c.cmp, keep_set);
    } else {
      std::vector<std::vector<double>> cols;
      cols.reserve(g.size());
      for (std::size_t j : g) cols.push_back(sampler.column(j));
      s = build_alpha_summary(cols, c.cmp, keep_set);
    }
    s.partition = b;
    s.alpha = alpha;
    s.scenarios = std::move(g);
  }
  return out;
}

CsaFormulation formulate_csa(const CsaInput& in,
                             const std::vector<double>& alpha,
                             const Package& prev_x,
                             const KeySets& keep_sets) {
  const QueryIR& q = *in.query;
  if (!q.canonical) throw ArgumentError("formulate_csa needs a canonical query");
  if (alpha.size() != q.constraints.size()) {
    throw ArgumentError("need one alpha per constraint");
  }
  const ScenarioSet fallback = empty_cache(in.relation->size(), in.m);
  const ScenarioSet& cache = in.scenarios != nullptr ? *in.scenarios : fallback;
  CsaFormulation out;
  out.saa = formulate_base(q, *in.relation, cache, in.scenario_seed,
                           *in.means, in.formulation);
  for (std::size_t k : q.probabilistic_indices()) {
    const Constraint& c = q.constraints[k];
    if (c.epigraph) continue;
    alpha_level(alpha[k], in.z, in.m);
    if (alpha[k] == 0.0) continue;
    static const std::set<TupleId> kNone;
    const auto keep = keep_sets.find(k);
    std::vector<Summary> sums = build_summaries(
        in, k, alpha[k], prev_x, keep == keep_sets.end() ? kNone : keep->second);
    std::vector<std::vector<double>> cols;
    cols.reserve(sums.size());
    for (const Summary& s : sums) cols.push_back(s.values);
    add_probabilistic_rows(out.saa, q, k, cols);
    out.summaries[k] = std::move(sums);
  }
  return out;
}

}  // namespace spq

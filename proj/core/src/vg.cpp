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

#include "spq/vg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "spq/errors.hpp"
#include "spq/parallel.hpp"
#include "spq/rng.hpp"

namespace spq {

namespace {

static_assert(std::endian::native == std::endian::little,
              "scenario files assume a little-endian host");

constexpr std::uint64_t kPathFlag = std::uint64_t{1} << 47;
constexpr char kMagic[8] = {'S', 'P', 'Q', 'S', 'C', 'E', 'N', '1'};
constexpr std::uint32_t kFormatVersion = 1;

double gbm_value(const VGSpec& spec, std::uint64_t key, TupleId i,
                 std::size_t j) {
  const std::size_t idx = i - 1;
  const double s0 = spec.param("s0").at(idx);
  const double mu = spec.param("drift").at(idx);
  const double sigma = spec.param("volatility").at(idx);
  const auto horizon =
      static_cast<int>(spec.param("horizon").at(idx));
  const std::uint64_t group =
      spec.groups.empty() ? i : static_cast<std::uint64_t>(spec.groups[idx]);
  KeyedStream path(key, group | kPathFlag, j);
  double log_growth = 0.0;
  for (int t = 0; t < horizon; ++t) {
    log_growth += (mu - 0.5 * sigma * sigma) + sigma * path.normal();
  }
  double price = s0 * std::exp(log_growth);
  return spec.output == GbmOutput::kPrice ? price : price - s0;
}

}  // namespace

std::uint64_t attribute_key(std::uint64_t base_seed, std::string_view attr) {
  return derive_seed(base_seed, attr, 0x5A17);
}

double realize_keyed(const VGSpec& spec, std::uint64_t key, TupleId i,
                     std::size_t j) {
  const std::size_t idx = i - 1;
  if (spec.family == Family::kPointMass) return spec.param("value").at(idx);
  if (spec.family == Family::kGbm) return gbm_value(spec, key, i, j);
  KeyedStream s(key, i, j);
  switch (spec.family) {
    case Family::kNormal: {
      double sd = spec.param("stddev").at(idx);
      double mean = spec.param("mean").at(idx);
      return sd == 0.0 ? mean : mean + sd * s.normal();
    }
    case Family::kPareto: {
      double scale = spec.param("scale").at(idx);
      double shape = spec.param("shape").at(idx);
      return spec.get("loc", idx, 0.0) +
             scale * std::pow(s.uniform_pos(), -1.0 / shape);
    }
    case Family::kExponential:
      return spec.get("loc", idx, 0.0) +
             s.exponential() / spec.param("rate").at(idx);
    case Family::kPoisson:
      return spec.get("loc", idx, 0.0) +
             static_cast<double>(s.poisson(spec.param("rate").at(idx)));
    case Family::kUniform: {
      double lo = spec.param("low").at(idx);
      double hi = spec.param("high").at(idx);
      double v = lo + (hi - lo) * s.uniform();
      return v < hi ? v : std::nextafter(hi, lo);
    }
    case Family::kStudentT: {
      double df = spec.param("df").at(idx);
      double z = s.normal();
      double chi2 = 2.0 * s.gamma(0.5 * df);
      return spec.get("loc", idx, 0.0) +
             spec.get("scale", idx, 1.0) * z / std::sqrt(chi2 / df);
    }
    case Family::kDiscrete: {
      const std::size_t d = spec.sources.size();
      auto pick = static_cast<std::size_t>(s.uniform() * static_cast<double>(d));
      return spec.sources[std::min(pick, d - 1)][idx];
    }
    case Family::kPointMass:
    case Family::kGbm:
      break;
  }
  return 0.0;
}

double realize(const VGSpec& spec, std::uint64_t base_seed,
               std::string_view attr, TupleId i, std::size_t j) {
  return realize_keyed(spec, attribute_key(base_seed, attr), i, j);
}

std::size_t ScenarioSet::attr_index(const std::string& attr) const {
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    if (attrs[a] == attr) return a;
  }
  throw AttributeError("scenario set has no attribute '" + attr + "'");
}

ScenarioSet generate_scenarios(const Relation& rel, std::size_t m,
                               std::uint64_t base_seed,
                               const GenerateOptions& opts) {
  if (m == 0) throw ArgumentError("need at least one scenario");
  ScenarioSet set;
  set.attrs = opts.attrs.empty() ? rel.stochastic_names() : opts.attrs;
  set.n = rel.size();
  set.m = m;
  const double bytes = static_cast<double>(set.attrs.size()) *
                       static_cast<double>(set.n) * static_cast<double>(m) *
                       sizeof(double);
  if (bytes > static_cast<double>(opts.memory_budget_bytes)) {
    throw ResourceError(
        "scenario set needs " + std::to_string(bytes / (1 << 20)) +
        " MiB, over the memory budget; use the tuple_wise or scenario_wise "
        "summary strategy to stream scenarios instead");
  }
  set.data.resize(set.attrs.size());
  for (std::size_t a = 0; a < set.attrs.size(); ++a) {
    const std::string& attr = set.attrs[a];
    std::vector<double>& out = set.data[a];
    out.assign(set.n * m, 0.0);
    if (rel.is_deterministic(attr)) {
      const auto& col = rel.column(attr);
      for (std::size_t j = 0; j < m; ++j) {
        std::copy(col.begin(), col.end(), out.begin() + j * set.n);
      }
      continue;
    }
    const VGSpec& spec = rel.spec(attr);
    const std::uint64_t key = attribute_key(base_seed, attr);
    for_each_chunk(m, 16, opts.jobs,
                   [&](std::size_t, std::size_t begin, std::size_t end) {
                     for (std::size_t j = begin; j < end; ++j) {
                       for (TupleId i = 1; i <= set.n; ++i) {
                         out[j * set.n + i - 1] = realize_keyed(spec, key, i, j);
                       }
                     }
                   });
  }
  return set;
}

MeanColumns mean_columns(const Relation& rel, std::size_t m_hat,
                         std::uint64_t base_seed, std::size_t jobs,
                         const std::vector<std::string>& attrs) {
  if (m_hat == 0) throw ArgumentError("M_hat must be >= 1");
  MeanColumns out;
  for (const std::string& a : rel.deterministic_names()) {
    out[a] = rel.column(a);
  }
  const std::vector<std::string> names =
      attrs.empty() ? rel.stochastic_names() : attrs;
  const std::size_t n = rel.size();
  for (const std::string& attr : names) {
    if (!rel.is_stochastic(attr)) continue;
    const VGSpec& spec = rel.spec(attr);
    const std::uint64_t key = attribute_key(base_seed, attr);
    std::vector<double>& col = out[attr];
    col.assign(n, 0.0);
    for_each_chunk(n, 8, jobs,
                   [&](std::size_t, std::size_t begin, std::size_t end) {
                     for (std::size_t idx = begin; idx < end; ++idx) {
                       double sum = 0.0;
                       for (std::size_t j = 0; j < m_hat; ++j) {
                         sum += realize_keyed(spec, key, idx + 1, j);
                       }
                       col[idx] = sum / static_cast<double>(m_hat);
                     }
                   });
  }
  return out;
}

ExprSampler::ExprSampler(const Relation& rel, const LinearExpr& expr,
                         std::uint64_t base_seed, const ScenarioSet* cache)
    : constant_(expr.constant), n_(rel.size()) {
  for (const Term& t : expr.terms) {
    if (rel.is_stochastic(t.attr)) {
      const std::vector<double>* cached = nullptr;
      if (cache != nullptr) {
        auto it = std::find(cache->attrs.begin(), cache->attrs.end(), t.attr);
        if (it != cache->attrs.end()) {
          cached = &cache->data[static_cast<std::size_t>(it - cache->attrs.begin())];
        }
      }
      stoch_.push_back({&rel.spec(t.attr), attribute_key(base_seed, t.attr),
                        t.coef, cached});
    } else {
      det_.push_back({&rel.column(t.attr), t.coef});
    }
  }
}

double ExprSampler::deterministic_part(TupleId i) const {
  double v = constant_;
  for (const DetTerm& d : det_) v += d.coef * (*d.column)[i - 1];
  return v;
}

double ExprSampler::value(TupleId i, std::size_t j) const {
  double v = deterministic_part(i);
  for (const StochTerm& s : stoch_) {
    const double r = s.cached != nullptr ? (*s.cached)[j * n_ + i - 1]
                                         : realize_keyed(*s.spec, s.key, i, j);
    v += s.coef * r;
  }
  return v;
}

std::vector<double> ExprSampler::column(std::size_t j) const {
  std::vector<double> out(n_);
  for (TupleId i = 1; i <= n_; ++i) out[i - 1] = value(i, j);
  return out;
}

void write_scenarios(const std::string& path, const ScenarioSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  auto put = [&](const auto& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  out.write(kMagic, sizeof(kMagic));
  put(kFormatVersion);
  put(static_cast<std::uint64_t>(set.n));
  put(static_cast<std::uint64_t>(set.m));
  put(static_cast<std::uint32_t>(set.attrs.size()));
  for (const std::string& a : set.attrs) {
    put(static_cast<std::uint32_t>(a.size()));
    out.write(a.data(), static_cast<std::streamsize>(a.size()));
  }
  for (const auto& col : set.data) {
    out.write(reinterpret_cast<const char*>(col.data()),
              static_cast<std::streamsize>(col.size() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

ScenarioSet read_scenarios(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  auto get = [&](auto& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw IoError("truncated scenario file '" + path + "'");
  };
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("'" + path + "' is not a scenario file");
  }
  std::uint32_t version = 0;
  get(version);
  if (version != kFormatVersion) {
    throw IoError("unsupported scenario file version " +
                  std::to_string(version));
  }
  std::uint64_t n = 0, m = 0;
  std::uint32_t count = 0;
  get(n);
  get(m);
  get(count);
  ScenarioSet set;
  set.n = n;
  set.m = m;
  for (std::uint32_t a = 0; a < count; ++a) {
    std::uint32_t len = 0;
    get(len);
    std::string name(len, '\0');
    in.read(name.data(), len);
    set.attrs.push_back(name);
  }
  set.data.resize(count);
  for (auto& col : set.data) {
    col.resize(n * m);
    in.read(reinterpret_cast<char*>(col.data()),
            static_cast<std::streamsize>(col.size() * sizeof(double)));
    if (!in) throw IoError("truncated scenario file '" + path + "'");
  }
  return set;
}

}  // namespace spq

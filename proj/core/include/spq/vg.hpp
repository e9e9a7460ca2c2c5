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

#ifndef SPQ_VG_HPP_
#define SPQ_VG_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spq/model.hpp"

namespace spq {

// Stream key for one attribute under one base seed.
std::uint64_t attribute_key(std::uint64_t base_seed, std::string_view attr);

// Value of tuple i (1-based) in scenario j (0-based).
double realize(const VGSpec& spec, std::uint64_t base_seed,
               std::string_view attr, TupleId i, std::size_t j);

// Same, with the attribute key precomputed.
double realize_keyed(const VGSpec& spec, std::uint64_t key, TupleId i,
                     std::size_t j);

// M scenarios held in memory, one column of N values per (attribute,
// scenario). Scenario j of attribute a starts at data[a][j * n].
struct ScenarioSet {
  std::vector<std::string> attrs;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<double>> data;

  std::size_t attr_index(const std::string& attr) const;  // AttributeError
  std::span<const double> column(std::size_t attr, std::size_t j) const {
    return {data[attr].data() + j * n, n};
  }
  std::span<const double> column(const std::string& attr,
                                 std::size_t j) const {
    return column(attr_index(attr), j);
  }
};

struct GenerateOptions {
  std::vector<std::string> attrs;  // empty = every stochastic attribute
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
  std::size_t jobs = 1;
};

ScenarioSet generate_scenarios(const Relation& rel, std::size_t m,
                               std::uint64_t base_seed,
                               const GenerateOptions& opts = {});

using MeanColumns = std::map<std::string, std::vector<double>>;

// Streaming average of each stochastic attribute over M_hat scenarios of the
// stream `base_seed`; deterministic attributes are copied. O(N) memory.
MeanColumns mean_columns(const Relation& rel, std::size_t m_hat,
                         std::uint64_t base_seed, std::size_t jobs = 1,
                         const std::vector<std::string>& attrs = {});

// Per-tuple value of a linear expression in scenario j, realized on demand
// or read from `cache` when it holds the attribute. Both routes perform the
// same arithmetic, so values agree bit for bit.
class ExprSampler {
 public:
  ExprSampler(const Relation& rel, const LinearExpr& expr,
              std::uint64_t base_seed, const ScenarioSet* cache = nullptr);

  double value(TupleId i, std::size_t j) const;
  // Values of all tuples in scenario j.
  std::vector<double> column(std::size_t j) const;
  bool stochastic() const { return !stoch_.empty(); }
  // Value when no stochastic term is present (or the deterministic part).
  double deterministic_part(TupleId i) const;

 private:
  struct StochTerm {
    const VGSpec* spec;
    std::uint64_t key;
    double coef;
    const std::vector<double>* cached;  // scenario-major N x M, or null
  };
  struct DetTerm {
    const std::vector<double>* column;
    double coef;
  };
  double constant_ = 0.0;
  std::size_t n_ = 0;
  std::vector<StochTerm> stoch_;
  std::vector<DetTerm> det_;
};

// Binary scenario file: "SPQSCEN1", u32 version, u64 N, u64 M, u32 attribute
// count, each name as u32 length + bytes, then per attribute M columns of N
// little-endian float64 values.
void write_scenarios(const std::string& path, const ScenarioSet& set);
ScenarioSet read_scenarios(const std::string& path);

}  // namespace spq

#endif  // SPQ_VG_HPP_

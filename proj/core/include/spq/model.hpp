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

#ifndef SPQ_MODEL_HPP_
#define SPQ_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spq/decimal.hpp"
#include "spq/vg_spec.hpp"

namespace spq {

// 1-based, gap-free tuple identifier.
using TupleId = std::size_t;

class Relation {
 public:
  Relation() = default;
  Relation(std::string name, std::size_t n);

  const std::string& name() const { return name_; }
  std::size_t size() const { return n_; }

  void add_deterministic(const std::string& attr, std::vector<double> column);
  void add_stochastic(const std::string& attr, VGSpec spec);

  bool has(const std::string& attr) const;
  bool is_deterministic(const std::string& attr) const;
  bool is_stochastic(const std::string& attr) const;

  // Throw AttributeError when the attribute is missing or of the other kind.
  const std::vector<double>& column(const std::string& attr) const;
  const VGSpec& spec(const std::string& attr) const;

  std::vector<std::string> deterministic_names() const;
  std::vector<std::string> stochastic_names() const;

 private:
  std::string name_;
  std::size_t n_ = 0;
  std::map<std::string, std::vector<double>> det_;
  std::map<std::string, VGSpec> stoch_;
};

enum class Cmp { kLe, kGe, kEq };

const char* cmp_symbol(Cmp c);
Cmp flip(Cmp c);  // <= <-> >=, = stays
bool holds(double lhs, Cmp c, double rhs);

struct Term {
  std::string attr;
  double coef = 1.0;
  friend bool operator==(const Term&, const Term&) = default;
};

// Per-tuple linear function  constant + sum coef * attr.  A package aggregate
// is the sum over tuples of this value times the multiplicity.
struct LinearExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  static LinearExpr count();
  static LinearExpr attribute(const std::string& attr, double coef = 1.0);

  // Merges duplicate attributes, drops zero coefficients, sorts by name.
  LinearExpr normalized() const;
  LinearExpr scaled(double factor) const;
  bool is_count() const { return terms.empty(); }
  std::vector<std::string> attributes() const;
  std::string to_string() const;

  friend bool operator==(const LinearExpr&, const LinearExpr&) = default;
};

enum class ConstraintKind { kDeterministic, kExpectation, kProbabilistic };
const char* kind_name(ConstraintKind k);

struct Constraint {
  ConstraintKind kind = ConstraintKind::kDeterministic;
  LinearExpr inner;
  Cmp cmp = Cmp::kLe;
  double rhs = 0.0;
  std::optional<Decimal> prob;  // probabilistic only; absent for the epigraph row
  bool point_mass = false;      // deterministic row rewritten as expectation
  bool epigraph = false;        // row added for a probability objective
  std::string label;

  bool is_probabilistic() const {
    return kind == ConstraintKind::kProbabilistic;
  }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

enum class Sense { kMinimize, kMaximize };
enum class ObjectiveKind { kNone, kDeterministic, kExpectation, kProbability };
const char* objective_kind_name(ObjectiveKind k);

struct Objective {
  Sense sense = Sense::kMinimize;
  ObjectiveKind kind = ObjectiveKind::kNone;
  LinearExpr inner;
  Cmp cmp = Cmp::kGe;       // probability kind only
  double threshold = 0.0;   // probability kind only
  bool use_means = false;   // expectation evaluated through mean columns
  bool point_mass = false;  // deterministic objective seen as an expectation
  bool complemented = false;  // min P(S op v) rewritten as max P(S flip v)

  friend bool operator==(const Objective&, const Objective&) = default;
};

struct QueryIR {
  std::string table;
  std::string alias;
  Objective objective;
  std::vector<Constraint> constraints;
  std::optional<std::int64_t> repeat_limit;
  // Tuples removed by a WHERE predicate (x_i fixed to 0); empty = none.
  std::vector<bool> excluded;
  bool canonical = false;

  std::size_t probabilistic_count() const;
  std::vector<std::size_t> probabilistic_indices() const;
  // Tightest (lo, hi) implied by COUNT(*) rows; hi absent if unbounded.
  std::pair<std::int64_t, std::optional<std::int64_t>> count_bounds() const;
  bool is_excluded(TupleId id) const {
    return !excluded.empty() && excluded[id - 1];
  }

  friend bool operator==(const QueryIR&, const QueryIR&) = default;
};

// Sparse bag of tuples.
class Package {
 public:
  Package() = default;
  Package(std::initializer_list<std::pair<const TupleId, std::int64_t>> init);
  static Package from_dense(std::span<const std::int64_t> counts);

  void set(TupleId id, std::int64_t count);  // count 0 erases
  std::int64_t get(TupleId id) const;
  bool empty() const { return counts_.empty(); }
  std::int64_t size() const;  // total multiplicity
  std::vector<TupleId> support() const;
  std::vector<std::int64_t> dense(std::size_t n) const;
  const std::map<TupleId, std::int64_t>& entries() const { return counts_; }
  std::string to_string() const;

  friend bool operator==(const Package&, const Package&) = default;
  friend bool operator<(const Package& a, const Package& b) {
    return a.counts_ < b.counts_;
  }

 private:
  std::map<TupleId, std::int64_t> counts_;
};

Package operator+(const Package& a, const Package& b);

// sum_i values[i-1] * x_i
double inner_sum(const Package& x, std::span<const double> values);

using ColumnMap = std::map<std::string, std::span<const double>>;

// sum_i (constant + sum coef * column[i]) * x_i; AttributeError when a term's
// column is absent from `columns`.
double inner_sum(const Package& x, const ColumnMap& columns,
                 const LinearExpr& expr);

// Per-tuple value of `expr` for tuple id `i` given its columns.
double tuple_value(const ColumnMap& columns, const LinearExpr& expr,
                   TupleId i);

enum class Interaction { kSupported, kCounteracted, kIndependent };
const char* interaction_name(Interaction i);

Interaction classify_interaction(const Objective& objective,
                                 const Constraint& constraint);

// Epigraph rewrite of probability objectives, expectation tagging of
// deterministic rows and objectives. Idempotent.
QueryIR canonicalize(const QueryIR& q, const Relation& rel);

// True when `x` satisfies every non-probabilistic row, bound, repeat limit
// and WHERE filter. On failure `reason` names the first violated rule.
bool satisfies_deterministic(const Package& x, const QueryIR& q,
                             const Relation& rel,
                             const std::map<std::string, std::vector<double>>& means,
                             std::string* reason = nullptr);

}  // namespace spq

#endif  // SPQ_MODEL_HPP_

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

#include "spq/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spq/errors.hpp"

namespace spq {

namespace {

constexpr double kFeasTol = 1e-6;

bool holds_tol(double lhs, Cmp c, double rhs) {
  switch (c) {
    case Cmp::kLe: return lhs <= rhs + kFeasTol;
    case Cmp::kGe: return lhs >= rhs - kFeasTol;
    case Cmp::kEq: return std::fabs(lhs - rhs) <= kFeasTol;
  }
  return false;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// VGSpec

const char* family_name(Family f) {
  switch (f) {
    case Family::kPointMass: return "point_mass";
    case Family::kNormal: return "normal";
    case Family::kPareto: return "pareto";
    case Family::kExponential: return "exponential";
    case Family::kPoisson: return "poisson";
    case Family::kUniform: return "uniform";
    case Family::kStudentT: return "student_t";
    case Family::kGbm: return "gbm";
    case Family::kDiscrete: return "discrete";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  static const Family all[] = {
      Family::kPointMass, Family::kNormal,   Family::kPareto,
      Family::kExponential, Family::kPoisson, Family::kUniform,
      Family::kStudentT,  Family::kGbm,      Family::kDiscrete};
  for (Family f : all) {
    if (name == family_name(f)) return f;
  }
  throw SpecError("unknown distribution family '" + name + "'");
}

double Param::min() const {
  if (column_.empty()) return scalar_;
  return *std::min_element(column_.begin(), column_.end());
}

double Param::max() const {
  if (column_.empty()) return scalar_;
  return *std::max_element(column_.begin(), column_.end());
}

const Param& VGSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) {
    throw SpecError(std::string(family_name(family)) +
                    " spec is missing parameter '" + key + "'");
  }
  return it->second;
}

double VGSpec::get(const std::string& key, std::size_t idx,
                   double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second.at(idx);
}

void VGSpec::check(std::size_t n) const {
  auto require = [&](const std::string& key) -> const Param& {
    const Param& p = param(key);
    if (p.per_tuple() && p.column().size() != n) {
      throw SpecError("parameter '" + key + "' has " +
                      std::to_string(p.column().size()) + " values, expected " +
                      std::to_string(n));
    }
    for (std::size_t i = 0; i < (p.per_tuple() ? n : 1); ++i) {
      if (!std::isfinite(p.at(i))) {
        throw SpecError("parameter '" + key + "' is not finite");
      }
    }
    return p;
  };
  auto positive = [&](const std::string& key) {
    if (require(key).min() <= 0.0) {
      throw SpecError("parameter '" + key + "' must be > 0");
    }
  };
  auto nonneg = [&](const std::string& key) {
    if (require(key).min() < 0.0) {
      throw SpecError("parameter '" + key + "' must be >= 0");
    }
  };
  auto optional = [&](const std::string& key) {
    if (has(key)) require(key);
  };
  switch (family) {
    case Family::kPointMass:
      require("value");
      break;
    case Family::kNormal:
      require("mean");
      nonneg("stddev");
      break;
    case Family::kPareto:
      positive("scale");
      positive("shape");
      optional("loc");
      break;
    case Family::kExponential:
    case Family::kPoisson:
      positive("rate");
      optional("loc");
      break;
    case Family::kUniform: {
      const Param& lo = require("low");
      const Param& hi = require("high");
      for (std::size_t i = 0; i < n; ++i) {
        if (!(hi.at(i) > lo.at(i))) {
          throw SpecError("uniform requires high > low");
        }
      }
      break;
    }
    case Family::kStudentT:
      positive("df");
      optional("loc");
      if (has("scale")) positive("scale");
      break;
    case Family::kGbm: {
      positive("s0");
      require("drift");
      nonneg("volatility");
      const Param& h = require("horizon");
      for (std::size_t i = 0; i < n; ++i) {
        double v = h.at(i);
        if (v < 1.0 || v != std::floor(v)) {
          throw SpecError("gbm horizon must be an integer >= 1");
        }
      }
      if (!groups.empty() && groups.size() != n) {
        throw SpecError("gbm group column has wrong length");
      }
      break;
    }
    case Family::kDiscrete:
      if (sources.empty()) {
        throw SpecError("discrete spec needs D >= 1 source columns");
      }
      for (const auto& s : sources) {
        if (s.size() != n) {
          throw SpecError("discrete source column has wrong length");
        }
      }
      break;
  }
}

// ---------------------------------------------------------------------------
// Relation

Relation::Relation(std::string name, std::size_t n)
    : name_(std::move(name)), n_(n) {
  if (n_ == 0) throw ArgumentError("a relation needs at least one tuple");
}

void Relation::add_deterministic(const std::string& attr,
                                 std::vector<double> column) {
  if (has(attr)) throw AttributeError("duplicate attribute '" + attr + "'");
  if (column.size() != n_) {
    throw AttributeError("column '" + attr + "' has " +
                         std::to_string(column.size()) + " values, expected " +
                         std::to_string(n_));
  }
  det_.emplace(attr, std::move(column));
}

void Relation::add_stochastic(const std::string& attr, VGSpec spec) {
  if (has(attr)) throw AttributeError("duplicate attribute '" + attr + "'");
  spec.check(n_);
  stoch_.emplace(attr, std::move(spec));
}

bool Relation::has(const std::string& attr) const {
  return det_.count(attr) > 0 || stoch_.count(attr) > 0;
}

bool Relation::is_deterministic(const std::string& attr) const {
  return det_.count(attr) > 0;
}

bool Relation::is_stochastic(const std::string& attr) const {
  return stoch_.count(attr) > 0;
}

const std::vector<double>& Relation::column(const std::string& attr) const {
  auto it = det_.find(attr);
  if (it == det_.end()) {
    throw AttributeError("no deterministic attribute '" + attr + "' in " +
                         name_);
  }
  return it->second;
}

const VGSpec& Relation::spec(const std::string& attr) const {
  auto it = stoch_.find(attr);
  if (it == stoch_.end()) {
    throw AttributeError("no stochastic attribute '" + attr + "' in " + name_);
  }
  return it->second;
}

std::vector<std::string> Relation::deterministic_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : det_) out.push_back(k);
  return out;
}

std::vector<std::string> Relation::stochastic_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : stoch_) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------
// Expressions

const char* cmp_symbol(Cmp c) {
  switch (c) {
    case Cmp::kLe: return "<=";
    case Cmp::kGe: return ">=";
    case Cmp::kEq: return "=";
  }
  return "?";
}

Cmp flip(Cmp c) {
  if (c == Cmp::kLe) return Cmp::kGe;
  if (c == Cmp::kGe) return Cmp::kLe;
  return c;
}

bool holds(double lhs, Cmp c, double rhs) {
  switch (c) {
    case Cmp::kLe: return lhs <= rhs;
    case Cmp::kGe: return lhs >= rhs;
    case Cmp::kEq: return lhs == rhs;
  }
  return false;
}

LinearExpr LinearExpr::count() {
  LinearExpr e;
  e.constant = 1.0;
  return e;
}

LinearExpr LinearExpr::attribute(const std::string& attr, double coef) {
  LinearExpr e;
  e.terms.push_back({attr, coef});
  return e;
}

LinearExpr LinearExpr::normalized() const {
  std::map<std::string, double> merged;
  for (const Term& t : terms) merged[t.attr] += t.coef;
  LinearExpr out;
  out.constant = constant;
  for (const auto& [attr, coef] : merged) {
    if (coef != 0.0) out.terms.push_back({attr, coef});
  }
  return out;
}

LinearExpr LinearExpr::scaled(double factor) const {
  LinearExpr out = *this;
  out.constant *= factor;
  for (Term& t : out.terms) t.coef *= factor;
  return out;
}

std::vector<std::string> LinearExpr::attributes() const {
  std::vector<std::string> out;
  for (const Term& t : terms) out.push_back(t.attr);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string LinearExpr::to_string() const {
  std::string out;
  for (const Term& t : terms) {
    if (!out.empty()) out += " + ";
    if (t.coef != 1.0) out += format_number(t.coef) + "*";
    out += t.attr;
  }
  if (constant != 0.0 || out.empty()) {
    if (!out.empty()) out += " + ";
    out += format_number(constant);
  }
  return out;
}

const char* kind_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::kDeterministic: return "deterministic";
    case ConstraintKind::kExpectation: return "expectation";
    case ConstraintKind::kProbabilistic: return "probabilistic";
  }
  return "?";
}

const char* objective_kind_name(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::kNone: return "none";
    case ObjectiveKind::kDeterministic: return "deterministic";
    case ObjectiveKind::kExpectation: return "expectation";
    case ObjectiveKind::kProbability: return "probability";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// QueryIR

std::size_t QueryIR::probabilistic_count() const {
  return probabilistic_indices().size();
}

std::vector<std::size_t> QueryIR::probabilistic_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    if (constraints[k].is_probabilistic()) out.push_back(k);
  }
  return out;
}

std::pair<std::int64_t, std::optional<std::int64_t>> QueryIR::count_bounds()
    const {
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi;
  for (const Constraint& c : constraints) {
    if (c.is_probabilistic() || !c.inner.is_count() || c.inner.constant <= 0) {
      continue;
    }
    double bound = c.rhs / c.inner.constant;
    if (c.cmp == Cmp::kLe || c.cmp == Cmp::kEq) {
      auto h = static_cast<std::int64_t>(std::floor(bound + 1e-9));
      hi = hi ? std::min(*hi, h) : h;
    }
    if (c.cmp == Cmp::kGe || c.cmp == Cmp::kEq) {
      lo = std::max(lo, static_cast<std::int64_t>(std::ceil(bound - 1e-9)));
    }
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Package

Package::Package(
    std::initializer_list<std::pair<const TupleId, std::int64_t>> init) {
  for (const auto& [id, c] : init) set(id, c);
}

Package Package::from_dense(std::span<const std::int64_t> counts) {
  Package p;
  for (std::size_t i = 0; i < counts.size(); ++i) p.set(i + 1, counts[i]);
  return p;
}

void Package::set(TupleId id, std::int64_t count) {
  if (id == 0) throw ArgumentError("tuple ids are 1-based");
  if (count < 0) throw ArgumentError("negative multiplicity");
  if (count == 0) {
    counts_.erase(id);
  } else {
    counts_[id] = count;
  }
}

std::int64_t Package::get(TupleId id) const {
  auto it = counts_.find(id);
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t Package::size() const {
  std::int64_t s = 0;
  for (const auto& [id, c] : counts_) s += c;
  return s;
}

std::vector<TupleId> Package::support() const {
  std::vector<TupleId> out;
  out.reserve(counts_.size());
  for (const auto& [id, c] : counts_) out.push_back(id);
  return out;
}

std::vector<std::int64_t> Package::dense(std::size_t n) const {
  std::vector<std::int64_t> out(n, 0);
  for (const auto& [id, c] : counts_) {
    if (id > n) throw ArgumentError("tuple id out of range");
    out[id - 1] = c;
  }
  return out;
}

std::string Package::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [id, c] : counts_) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(id) + ":" + std::to_string(c);
  }
  return out + "}";
}

Package operator+(const Package& a, const Package& b) {
  Package out = a;
  for (const auto& [id, c] : b.entries()) out.set(id, out.get(id) + c);
  return out;
}

double inner_sum(const Package& x, std::span<const double> values) {
  double s = 0.0;
  for (const auto& [id, c] : x.entries()) {
    if (id > values.size()) throw ArgumentError("tuple id out of range");
    s += values[id - 1] * static_cast<double>(c);
  }
  return s;
}

double tuple_value(const ColumnMap& columns, const LinearExpr& expr,
                   TupleId i) {
  double v = expr.constant;
  for (const Term& t : expr.terms) {
    auto it = columns.find(t.attr);
    if (it == columns.end()) {
      throw AttributeError("unknown attribute '" + t.attr + "'");
    }
    if (i > it->second.size()) throw ArgumentError("tuple id out of range");
    v += t.coef * it->second[i - 1];
  }
  return v;
}

double inner_sum(const Package& x, const ColumnMap& columns,
                 const LinearExpr& expr) {
  for (const Term& t : expr.terms) {
    if (columns.find(t.attr) == columns.end()) {
      throw AttributeError("unknown attribute '" + t.attr + "'");
    }
  }
  double s = 0.0;
  for (const auto& [id, c] : x.entries()) {
    s += tuple_value(columns, expr, id) * static_cast<double>(c);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Interaction and canonical form

const char* interaction_name(Interaction i) {
  switch (i) {
    case Interaction::kSupported: return "supported";
    case Interaction::kCounteracted: return "counteracted";
    case Interaction::kIndependent: return "independent";
  }
  return "?";
}

Interaction classify_interaction(const Objective& objective,
                                 const Constraint& constraint) {
  if (!constraint.is_probabilistic() || constraint.epigraph ||
      objective.kind == ObjectiveKind::kNone ||
      objective.kind == ObjectiveKind::kProbability) {
    return Interaction::kIndependent;
  }
  LinearExpr obj = objective.inner.normalized();
  Cmp cmp = constraint.cmp;
  if (objective.sense == Sense::kMaximize) {
    // max E[f] is min E[-f]; the constraint on f becomes one on -f with the
    // relation flipped.
    obj = obj.scaled(-1.0);
    LinearExpr negated = constraint.inner.normalized().scaled(-1.0);
    if (!(negated == obj)) return Interaction::kIndependent;
    cmp = flip(cmp);
  } else if (!(constraint.inner.normalized() == obj)) {
    return Interaction::kIndependent;
  }
  if (cmp == Cmp::kLe) return Interaction::kSupported;
  if (cmp == Cmp::kGe) return Interaction::kCounteracted;
  return Interaction::kIndependent;
}

namespace {

bool expr_is_stochastic(const LinearExpr& e, const Relation& rel) {
  for (const Term& t : e.terms) {
    if (rel.is_stochastic(t.attr)) return true;
  }
  return false;
}

}  // namespace

QueryIR canonicalize(const QueryIR& q, const Relation& rel) {
  QueryIR out = q;
  for (Constraint& c : out.constraints) {
    c.inner = c.inner.normalized();
    for (const Term& t : c.inner.terms) {
      if (!rel.has(t.attr)) {
        throw AttributeError("unknown attribute '" + t.attr + "'");
      }
    }
    if (c.kind == ConstraintKind::kDeterministic) {
      if (expr_is_stochastic(c.inner, rel)) {
        throw SemanticsError("constraint on stochastic attribute needs "
                             "EXPECTED or WITH PROBABILITY: " +
                             c.inner.to_string());
      }
      c.kind = ConstraintKind::kExpectation;
      c.point_mass = true;
    }
  }
  Objective& obj = out.objective;
  obj.inner = obj.inner.normalized();
  for (const Term& t : obj.inner.terms) {
    if (!rel.has(t.attr)) {
      throw AttributeError("unknown attribute '" + t.attr + "'");
    }
  }
  switch (obj.kind) {
    case ObjectiveKind::kNone:
      break;
    case ObjectiveKind::kDeterministic:
      if (expr_is_stochastic(obj.inner, rel)) {
        throw SemanticsError("objective on stochastic attribute needs "
                             "EXPECTED or PROBABILITY: " +
                             obj.inner.to_string());
      }
      obj.kind = ObjectiveKind::kExpectation;
      obj.point_mass = true;
      obj.use_means = true;
      break;
    case ObjectiveKind::kExpectation:
      obj.use_means = true;
      break;
    case ObjectiveKind::kProbability: {
      bool has_epigraph = std::any_of(
          out.constraints.begin(), out.constraints.end(),
          [](const Constraint& c) { return c.epigraph; });
      if (has_epigraph) break;
      if (obj.cmp == Cmp::kEq) {
        throw SemanticsError("probability objective cannot use '='");
      }
      if (obj.sense == Sense::kMinimize) {
        obj.sense = Sense::kMaximize;
        obj.cmp = flip(obj.cmp);
        obj.complemented = !obj.complemented;
      }
      Constraint epi;
      epi.kind = ConstraintKind::kProbabilistic;
      epi.inner = obj.inner;
      epi.cmp = obj.cmp;
      epi.rhs = obj.threshold;
      epi.epigraph = true;
      epi.label = "objective";
      out.constraints.push_back(epi);
      break;
    }
  }
  out.canonical = true;
  return out;
}

bool satisfies_deterministic(
    const Package& x, const QueryIR& q, const Relation& rel,
    const std::map<std::string, std::vector<double>>& means,
    std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason != nullptr) *reason = why;
    return false;
  };
  for (const auto& [id, c] : x.entries()) {
    if (id > rel.size()) return fail("tuple id out of range");
    if (q.is_excluded(id)) {
      return fail("tuple " + std::to_string(id) + " is filtered by WHERE");
    }
    if (q.repeat_limit && c > *q.repeat_limit + 1) {
      return fail("tuple " + std::to_string(id) + " exceeds REPEAT limit");
    }
  }
  ColumnMap cols;
  for (const std::string& a : rel.deterministic_names()) {
    cols.emplace(a, std::span<const double>(rel.column(a)));
  }
  for (const auto& [a, col] : means) {
    if (!cols.count(a)) cols.emplace(a, std::span<const double>(col));
  }
  for (std::size_t k = 0; k < q.constraints.size(); ++k) {
    const Constraint& c = q.constraints[k];
    if (c.is_probabilistic()) continue;
    double lhs = inner_sum(x, cols, c.inner);
    if (!holds_tol(lhs, c.cmp, c.rhs)) {
      return fail("constraint " + (c.label.empty() ? std::to_string(k + 1)
                                                   : c.label) +
                  " violated: " + format_number(lhs) + " " +
                  cmp_symbol(c.cmp) + " " + format_number(c.rhs));
    }
  }
  return true;
}

}  // namespace spq

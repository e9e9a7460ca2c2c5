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

#ifndef SPQ_SPAQL_HPP_
#define SPQ_SPAQL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spq/decimal.hpp"
#include "spq/model.hpp"

namespace spq {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

enum class TokenKind {
  kIdent,
  kKeyword,
  kNumber,
  kLParen,
  kRParen,
  kStar,
  kComma,
  kPlus,
  kMinus,
  kSlash,
  kSemicolon,
  kDot,
  kLe,
  kGe,
  kLt,
  kGt,
  kEq,
  kNe,
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // keywords upper-cased, everything else verbatim
  SourcePos pos;
};

// Splits sPaQL text into tokens. Keywords are case-insensitive; "--" starts a
// line comment; the Unicode symbols for <= and >= are accepted.
std::vector<Token> tokenize(std::string_view text);

namespace ast {

struct Term {
  double coef = 1.0;
  std::string attr;  // empty: constant term
  friend bool operator==(const Term&, const Term&) = default;
};

struct Aggregate {
  bool count = false;  // COUNT(*)
  std::vector<Term> terms;
  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct ProbabilityClause {
  Cmp cmp = Cmp::kGe;
  Decimal p;
  friend bool operator==(const ProbabilityClause&,
                         const ProbabilityClause&) = default;
};

struct Constraint {
  bool expected = false;
  Aggregate agg;
  bool between = false;
  Cmp cmp = Cmp::kLe;
  double rhs = 0.0;  // or lower end of BETWEEN
  double hi = 0.0;   // upper end of BETWEEN
  std::optional<ProbabilityClause> prob;
  SourcePos pos;
  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.expected == b.expected && a.agg == b.agg &&
           a.between == b.between && a.cmp == b.cmp && a.rhs == b.rhs &&
           a.hi == b.hi && a.prob == b.prob;
  }
};

enum class ObjectiveForm { kPlain, kExpected, kProbability };

struct Objective {
  Sense sense = Sense::kMinimize;
  ObjectiveForm form = ObjectiveForm::kPlain;
  Aggregate agg;
  Cmp cmp = Cmp::kGe;  // probability form
  double threshold = 0.0;
  SourcePos pos;
  friend bool operator==(const Objective& a, const Objective& b) {
    return a.sense == b.sense && a.form == b.form && a.agg == b.agg &&
           a.cmp == b.cmp && a.threshold == b.threshold;
  }
};

enum class PredOp { kLe, kGe, kLt, kGt, kEq, kNe };

struct Predicate {
  std::string attr;
  PredOp op = PredOp::kEq;
  double value = 0.0;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct Query {
  std::string alias;
  std::string table;
  std::vector<Predicate> where;
  std::optional<std::int64_t> repeat;
  std::vector<Constraint> such_that;
  std::optional<Objective> objective;
  friend bool operator==(const Query&, const Query&) = default;
};

}  // namespace ast

using Ast = ast::Query;

// Throws ParseError (with position and expected-token set) on lexical or
// grammar errors and SemanticsError for well-formed but meaningless input
// such as a probability outside (0, 1).
Ast parse(std::string_view text);

// Canonical single-line text that parses back to an equal Ast.
std::string pretty_print(const Ast& ast);

std::string ast_to_json(const Ast& ast, int indent = 2);

// Attribute resolution, BETWEEN splitting, normalization of P(.) <= p into
// P(flipped) >= 1 - p, REPEAT and WHERE handling.
QueryIR lower(const Ast& ast, const Relation& rel);

// parse + lower + canonicalize.
QueryIR compile_query(std::string_view text, const Relation& rel);

}  // namespace spq

#endif  // SPQ_SPAQL_HPP_

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

#include <charconv>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spq/errors.hpp"
#include "spq/spaql.hpp"

namespace spq {

namespace {

const char* token_name(TokenKind k) {
  switch (k) {
    case TokenKind::kIdent: return "identifier";
    case TokenKind::kKeyword: return "keyword";
    case TokenKind::kNumber: return "number";
    case TokenKind::kLParen: return "'('";
    case TokenKind::kRParen: return "')'";
    case TokenKind::kStar: return "'*'";
    case TokenKind::kComma: return "','";
    case TokenKind::kPlus: return "'+'";
    case TokenKind::kMinus: return "'-'";
    case TokenKind::kSlash: return "'/'";
    case TokenKind::kSemicolon: return "';'";
    case TokenKind::kDot: return "'.'";
    case TokenKind::kLe: return "'<='";
    case TokenKind::kGe: return "'>='";
    case TokenKind::kLt: return "'<'";
    case TokenKind::kGt: return "'>'";
    case TokenKind::kEq: return "'='";
    case TokenKind::kNe: return "'<>'";
    case TokenKind::kEnd: return "end of input";
  }
  return "?";
}

double to_double(const Token& t) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size() ||
      !std::isfinite(v)) {
    throw ParseError("number out of range '" + t.text + "'", t.pos.line,
                     t.pos.column);
  }
  return v;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Ast query() {
    Ast q;
    expect_kw("SELECT");
    expect_kw("PACKAGE");
    expect(TokenKind::kLParen);
    expect(TokenKind::kStar);
    expect(TokenKind::kRParen);
    if (accept_kw("AS")) q.alias = expect(TokenKind::kIdent).text;
    expect_kw("FROM");
    q.table = expect(TokenKind::kIdent).text;
    bool seen_where = false;
    bool seen_repeat = false;
    for (;;) {
      if (!seen_where && accept_kw("WHERE")) {
        seen_where = true;
        q.where.push_back(predicate());
        while (at_kw("AND")) {
          next();
          q.where.push_back(predicate());
        }
      } else if (!seen_repeat && accept_kw("REPEAT")) {
        seen_repeat = true;
        const Token& t = expect(TokenKind::kNumber);
        double v = to_double(t);
        if (v < 0 || v != std::floor(v) || v > 1e15) {
          throw SemanticsError(fmt::format(
              "{}:{}: REPEAT needs a nonnegative integer", t.pos.line,
              t.pos.column));
        }
        q.repeat = static_cast<std::int64_t>(v);
      } else {
        break;
      }
    }
    if (accept_kw("SUCH")) {
      expect_kw("THAT");
      q.such_that.push_back(constraint());
      while (accept_kw("AND")) q.such_that.push_back(constraint());
    }
    if (at_kw("MINIMIZE") || at_kw("MAXIMIZE")) q.objective = objective();
    accept(TokenKind::kSemicolon);
    if (!at(TokenKind::kEnd)) {
      std::vector<std::string> exp;
      if (q.such_that.empty() && !q.objective) exp.push_back("SUCH THAT");
      if (!q.such_that.empty() && !q.objective) exp.push_back("AND");
      if (!q.objective) {
        exp.push_back("MINIMIZE");
        exp.push_back("MAXIMIZE");
      }
      exp.push_back("end of input");
      fail(exp);
    }
    return q;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool at_kw(std::string_view kw) const {
    return cur().kind == TokenKind::kKeyword && cur().text == kw;
  }
  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool accept(TokenKind k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = cur();
    std::string found = t.kind == TokenKind::kEnd
                            ? "end of input"
                            : "'" + t.text + "'";
    throw ParseError("unexpected " + found, t.pos.line, t.pos.column,
                     std::move(expected));
  }

  const Token& expect(TokenKind k) {
    if (!at(k)) fail({token_name(k)});
    return next();
  }
  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail({std::string(kw)});
    next();
  }

  double signed_number() {
    bool neg = false;
    while (at(TokenKind::kMinus) || at(TokenKind::kPlus)) {
      if (next().kind == TokenKind::kMinus) neg = !neg;
    }
    if (!at(TokenKind::kNumber)) fail({"number"});
    double v = to_double(next());
    return neg ? -v : v;
  }

  ast::Predicate predicate() {
    ast::Predicate p;
    p.attr = qualified_ident();
    switch (cur().kind) {
      case TokenKind::kLe: p.op = ast::PredOp::kLe; break;
      case TokenKind::kGe: p.op = ast::PredOp::kGe; break;
      case TokenKind::kLt: p.op = ast::PredOp::kLt; break;
      case TokenKind::kGt: p.op = ast::PredOp::kGt; break;
      case TokenKind::kEq: p.op = ast::PredOp::kEq; break;
      case TokenKind::kNe: p.op = ast::PredOp::kNe; break;
      default: fail({"'<='", "'>='", "'<'", "'>'", "'='", "'<>'"});
    }
    next();
    p.value = signed_number();
    return p;
  }

  std::string qualified_ident() {
    std::string name = expect(TokenKind::kIdent).text;
    if (accept(TokenKind::kDot)) {
      // alias.attr: the alias is dropped, single-relation queries only.
      name = expect(TokenKind::kIdent).text;
    }
    return name;
  }

  // term := ['-'|'+']* (number ['*' ident] | ident [('*'|'/') number])
  void term(std::vector<ast::Term>& out, bool negate) {
    while (at(TokenKind::kMinus) || at(TokenKind::kPlus)) {
      if (next().kind == TokenKind::kMinus) negate = !negate;
    }
    double sign = negate ? -1.0 : 1.0;
    if (at(TokenKind::kNumber)) {
      double c = to_double(next());
      if (accept(TokenKind::kStar)) {
        out.push_back({sign * c, qualified_ident()});
      } else {
        out.push_back({sign * c, ""});
      }
      return;
    }
    if (at(TokenKind::kIdent)) {
      std::string name = qualified_ident();
      double c = 1.0;
      if (accept(TokenKind::kStar)) {
        c = signed_number();
      } else if (accept(TokenKind::kSlash)) {
        const Token& t = cur();
        double d = signed_number();
        if (d == 0.0) {
          throw SemanticsError(fmt::format("{}:{}: division by zero",
                                           t.pos.line, t.pos.column));
        }
        c = 1.0 / d;
      }
      out.push_back({sign * c, name});
      return;
    }
    if (at(TokenKind::kKeyword) && cur().text == "SELECT") {
      throw SemanticsError(fmt::format(
          "{}:{}: aggregates over subqueries are not supported",
          cur().pos.line, cur().pos.column));
    }
    fail({"number", "identifier"});
  }

  ast::Aggregate aggregate() {
    ast::Aggregate a;
    if (at(TokenKind::kLParen) && i_ + 1 < toks_.size() &&
        toks_[i_ + 1].kind == TokenKind::kKeyword &&
        toks_[i_ + 1].text == "SELECT") {
      throw SemanticsError(fmt::format(
          "{}:{}: aggregates over subqueries are not supported",
          cur().pos.line, cur().pos.column));
    }
    if (accept_kw("COUNT")) {
      expect(TokenKind::kLParen);
      expect(TokenKind::kStar);
      expect(TokenKind::kRParen);
      a.count = true;
      return a;
    }
    if (!accept_kw("SUM")) fail({"SUM", "COUNT"});
    expect(TokenKind::kLParen);
    term(a.terms, false);
    while (at(TokenKind::kPlus) || at(TokenKind::kMinus)) {
      bool neg = next().kind == TokenKind::kMinus;
      term(a.terms, neg);
    }
    expect(TokenKind::kRParen);
    return a;
  }

  Cmp comparison() {
    switch (cur().kind) {
      case TokenKind::kLe: next(); return Cmp::kLe;
      case TokenKind::kGe: next(); return Cmp::kGe;
      case TokenKind::kEq: next(); return Cmp::kEq;
      default: break;
    }
    fail({"'<='", "'>='", "'='"});
  }

  ast::Constraint constraint() {
    ast::Constraint c;
    c.pos = cur().pos;
    if (accept_kw("EXPECTED")) {
      c.expected = true;
      if (accept(TokenKind::kLParen)) {
        c.agg = aggregate();
        expect(TokenKind::kRParen);
      } else {
        c.agg = aggregate();
      }
    } else {
      c.agg = aggregate();
    }
    if (accept_kw("BETWEEN")) {
      c.between = true;
      c.rhs = signed_number();
      expect_kw("AND");
      c.hi = signed_number();
      if (c.hi < c.rhs) {
        throw SemanticsError(fmt::format("{}:{}: empty BETWEEN range",
                                         c.pos.line, c.pos.column));
      }
    } else {
      c.cmp = comparison();
      c.rhs = signed_number();
    }
    if (at_kw("WITH")) {
      const SourcePos wpos = cur().pos;
      next();
      expect_kw("PROBABILITY");
      ast::ProbabilityClause pc;
      if (accept(TokenKind::kGe)) {
        pc.cmp = Cmp::kGe;
      } else if (accept(TokenKind::kLe)) {
        pc.cmp = Cmp::kLe;
      } else {
        fail({"'>='", "'<='"});
      }
      const Token& pt = expect(TokenKind::kNumber);
      pc.p = Decimal::parse(pt.text);
      if (!pc.p.in_open_unit()) {
        throw SemanticsError(fmt::format(
            "{}:{}: probability {} must lie strictly between 0 and 1",
            pt.pos.line, pt.pos.column, pt.text));
      }
      if (c.expected) {
        throw SemanticsError(fmt::format(
            "{}:{}: EXPECTED cannot carry WITH PROBABILITY", wpos.line,
            wpos.column));
      }
      if (c.between || c.cmp == Cmp::kEq) {
        throw SemanticsError(fmt::format(
            "{}:{}: probabilistic constraints need <= or >=", c.pos.line,
            c.pos.column));
      }
      c.prob = pc;
    }
    return c;
  }

  ast::Objective objective() {
    ast::Objective o;
    o.pos = cur().pos;
    o.sense = next().text == "MINIMIZE" ? Sense::kMinimize : Sense::kMaximize;
    if (accept_kw("EXPECTED")) {
      o.form = ast::ObjectiveForm::kExpected;
      if (accept(TokenKind::kLParen)) {
        o.agg = aggregate();
        expect(TokenKind::kRParen);
      } else {
        o.agg = aggregate();
      }
    } else if (accept_kw("PROBABILITY")) {
      o.form = ast::ObjectiveForm::kProbability;
      accept_kw("OF");
      bool paren = accept(TokenKind::kLParen);
      o.agg = aggregate();
      if (at(TokenKind::kEq)) {
        throw SemanticsError(fmt::format(
            "{}:{}: probability objectives need <= or >=", cur().pos.line,
            cur().pos.column));
      }
      if (accept(TokenKind::kLe)) {
        o.cmp = Cmp::kLe;
      } else if (accept(TokenKind::kGe)) {
        o.cmp = Cmp::kGe;
      } else {
        fail({"'<='", "'>='"});
      }
      o.threshold = signed_number();
      if (paren) expect(TokenKind::kRParen);
    } else {
      o.form = ast::ObjectiveForm::kPlain;
      o.agg = aggregate();
    }
    return o;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

std::string number_text(double v) { return fmt::format("{}", v); }

std::string aggregate_text(const ast::Aggregate& a) {
  if (a.count) return "COUNT(*)";
  std::string out = "SUM(";
  for (std::size_t k = 0; k < a.terms.size(); ++k) {
    const ast::Term& t = a.terms[k];
    double c = t.coef;
    if (k > 0) {
      out += c < 0 ? " - " : " + ";
      c = std::fabs(c);
    } else if (c < 0 && !t.attr.empty()) {
      out += "-";
      c = -c;
    }
    if (t.attr.empty()) {
      out += number_text(c);
    } else if (c == 1.0) {
      out += t.attr;
    } else {
      out += number_text(c) + " * " + t.attr;
    }
  }
  return out + ")";
}

const char* pred_symbol(ast::PredOp op) {
  switch (op) {
    case ast::PredOp::kLe: return "<=";
    case ast::PredOp::kGe: return ">=";
    case ast::PredOp::kLt: return "<";
    case ast::PredOp::kGt: return ">";
    case ast::PredOp::kEq: return "=";
    case ast::PredOp::kNe: return "<>";
  }
  return "?";
}

bool pred_holds(double v, ast::PredOp op, double rhs) {
  switch (op) {
    case ast::PredOp::kLe: return v <= rhs;
    case ast::PredOp::kGe: return v >= rhs;
    case ast::PredOp::kLt: return v < rhs;
    case ast::PredOp::kGt: return v > rhs;
    case ast::PredOp::kEq: return v == rhs;
    case ast::PredOp::kNe: return v != rhs;
  }
  return false;
}

nlohmann::json aggregate_json(const ast::Aggregate& a) {
  nlohmann::json j;
  if (a.count) {
    j["aggregate"] = "COUNT";
    return j;
  }
  j["aggregate"] = "SUM";
  j["terms"] = nlohmann::json::array();
  for (const auto& t : a.terms) {
    nlohmann::json tj;
    tj["coef"] = t.coef;
    if (t.attr.empty()) {
      tj["attr"] = nullptr;
    } else {
      tj["attr"] = t.attr;
    }
    j["terms"].push_back(tj);
  }
  return j;
}

}  // namespace

Ast parse(std::string_view text) { return Parser(tokenize(text)).query(); }

std::string pretty_print(const Ast& q) {
  std::string out = "SELECT PACKAGE(*)";
  if (!q.alias.empty()) out += " AS " + q.alias;
  out += " FROM " + q.table;
  for (std::size_t k = 0; k < q.where.size(); ++k) {
    out += k == 0 ? " WHERE " : " AND ";
    out += q.where[k].attr + " " + pred_symbol(q.where[k].op) + " " +
           number_text(q.where[k].value);
  }
  if (q.repeat) out += " REPEAT " + std::to_string(*q.repeat);
  for (std::size_t k = 0; k < q.such_that.size(); ++k) {
    const ast::Constraint& c = q.such_that[k];
    out += k == 0 ? " SUCH THAT " : " AND ";
    std::string agg = aggregate_text(c.agg);
    out += c.expected ? "EXPECTED(" + agg + ")" : agg;
    if (c.between) {
      out += " BETWEEN " + number_text(c.rhs) + " AND " + number_text(c.hi);
    } else {
      out += std::string(" ") + cmp_symbol(c.cmp) + " " + number_text(c.rhs);
    }
    if (c.prob) {
      out += std::string(" WITH PROBABILITY ") + cmp_symbol(c.prob->cmp) +
             " " + c.prob->p.to_string();
    }
  }
  if (q.objective) {
    const ast::Objective& o = *q.objective;
    out += o.sense == Sense::kMinimize ? " MINIMIZE " : " MAXIMIZE ";
    std::string agg = aggregate_text(o.agg);
    switch (o.form) {
      case ast::ObjectiveForm::kPlain: out += agg; break;
      case ast::ObjectiveForm::kExpected: out += "EXPECTED(" + agg + ")"; break;
      case ast::ObjectiveForm::kProbability:
        out += "PROBABILITY OF(" + agg + " " + cmp_symbol(o.cmp) + " " +
               number_text(o.threshold) + ")";
        break;
    }
  }
  return out;
}

std::string ast_to_json(const Ast& q, int indent) {
  nlohmann::json j;
  j["select"] = {{"package", "*"},
                 {"alias", q.alias.empty() ? nlohmann::json(nullptr)
                                           : nlohmann::json(q.alias)}};
  j["from"] = q.table;
  j["where"] = nlohmann::json::array();
  for (const auto& p : q.where) {
    j["where"].push_back(
        {{"attr", p.attr}, {"op", pred_symbol(p.op)}, {"value", p.value}});
  }
  j["repeat"] = q.repeat ? nlohmann::json(*q.repeat) : nlohmann::json(nullptr);
  j["such_that"] = nlohmann::json::array();
  for (const auto& c : q.such_that) {
    nlohmann::json cj = aggregate_json(c.agg);
    cj["expected"] = c.expected;
    if (c.between) {
      cj["between"] = {c.rhs, c.hi};
    } else {
      cj["op"] = cmp_symbol(c.cmp);
      cj["rhs"] = c.rhs;
    }
    if (c.prob) {
      cj["probability"] = {{"op", cmp_symbol(c.prob->cmp)},
                           {"p", c.prob->p.to_string()}};
    }
    cj["position"] = {{"line", c.pos.line}, {"column", c.pos.column}};
    j["such_that"].push_back(cj);
  }
  if (q.objective) {
    const ast::Objective& o = *q.objective;
    nlohmann::json oj = aggregate_json(o.agg);
    oj["sense"] = o.sense == Sense::kMinimize ? "minimize" : "maximize";
    switch (o.form) {
      case ast::ObjectiveForm::kPlain: oj["form"] = "plain"; break;
      case ast::ObjectiveForm::kExpected: oj["form"] = "expected"; break;
      case ast::ObjectiveForm::kProbability:
        oj["form"] = "probability";
        oj["op"] = cmp_symbol(o.cmp);
        oj["threshold"] = o.threshold;
        break;
    }
    j["objective"] = oj;
  } else {
    j["objective"] = nullptr;
  }
  return j.dump(indent);
}

namespace {

LinearExpr to_expr(const ast::Aggregate& a, const Relation& rel) {
  if (a.count) return LinearExpr::count();
  LinearExpr e;
  for (const ast::Term& t : a.terms) {
    if (t.attr.empty()) {
      e.constant += t.coef;
      continue;
    }
    if (!rel.has(t.attr)) {
      throw AttributeError("unknown attribute '" + t.attr + "' in table " +
                           rel.name());
    }
    e.terms.push_back({t.attr, t.coef});
  }
  return e.normalized();
}

bool stochastic(const LinearExpr& e, const Relation& rel) {
  for (const Term& t : e.terms) {
    if (rel.is_stochastic(t.attr)) return true;
  }
  return false;
}

}  // namespace

QueryIR lower(const Ast& q, const Relation& rel) {
  if (q.table != rel.name()) {
    throw SemanticsError("unknown table '" + q.table + "' (relation is '" +
                         rel.name() + "')");
  }
  QueryIR ir;
  ir.table = q.table;
  ir.alias = q.alias;
  ir.repeat_limit = q.repeat;
  if (!q.where.empty()) {
    ir.excluded.assign(rel.size(), false);
    for (const ast::Predicate& p : q.where) {
      if (!rel.has(p.attr)) {
        throw AttributeError("unknown attribute '" + p.attr + "' in WHERE");
      }
      if (rel.is_stochastic(p.attr)) {
        throw SemanticsError("WHERE cannot test stochastic attribute '" +
                             p.attr + "'");
      }
      const auto& col = rel.column(p.attr);
      for (std::size_t i = 0; i < rel.size(); ++i) {
        if (!pred_holds(col[i], p.op, p.value)) ir.excluded[i] = true;
      }
    }
  }
  for (std::size_t k = 0; k < q.such_that.size(); ++k) {
    const ast::Constraint& c = q.such_that[k];
    Constraint row;
    row.inner = to_expr(c.agg, rel);
    row.label = "c" + std::to_string(k + 1);
    if (c.prob) {
      row.kind = ConstraintKind::kProbabilistic;
      row.cmp = c.cmp;
      row.rhs = c.rhs;
      row.prob = c.prob->p;
      if (c.prob->cmp == Cmp::kLe) {
        // P(S op v) <= p  <=>  P(S flip v) >= 1 - p, boundary ties ignored.
        row.cmp = flip(row.cmp);
        row.prob = c.prob->p.complement();
      }
      ir.constraints.push_back(row);
      continue;
    }
    row.kind = c.expected ? ConstraintKind::kExpectation
                          : ConstraintKind::kDeterministic;
    if (!c.expected && stochastic(row.inner, rel)) {
      throw SemanticsError(
          fmt::format("{}:{}: constraint on stochastic attribute needs "
                      "EXPECTED or WITH PROBABILITY",
                      c.pos.line, c.pos.column));
    }
    if (c.between) {
      Constraint lo = row, hi = row;
      lo.cmp = Cmp::kGe;
      lo.rhs = c.rhs;
      lo.label += ".lo";
      hi.cmp = Cmp::kLe;
      hi.rhs = c.hi;
      hi.label += ".hi";
      ir.constraints.push_back(lo);
      ir.constraints.push_back(hi);
    } else {
      row.cmp = c.cmp;
      row.rhs = c.rhs;
      ir.constraints.push_back(row);
    }
  }
  if (q.objective) {
    const ast::Objective& o = *q.objective;
    Objective& obj = ir.objective;
    obj.sense = o.sense;
    obj.inner = to_expr(o.agg, rel);
    switch (o.form) {
      case ast::ObjectiveForm::kPlain:
        if (stochastic(obj.inner, rel)) {
          throw SemanticsError(fmt::format(
              "{}:{}: objective on stochastic attribute needs EXPECTED or "
              "PROBABILITY",
              o.pos.line, o.pos.column));
        }
        obj.kind = ObjectiveKind::kDeterministic;
        break;
      case ast::ObjectiveForm::kExpected:
        obj.kind = ObjectiveKind::kExpectation;
        break;
      case ast::ObjectiveForm::kProbability:
        obj.kind = ObjectiveKind::kProbability;
        obj.cmp = o.cmp;
        obj.threshold = o.threshold;
        break;
    }
  }
  return ir;
}

QueryIR compile_query(std::string_view text, const Relation& rel) {
  return canonicalize(lower(parse(text), rel), rel);
}

}  // namespace spq

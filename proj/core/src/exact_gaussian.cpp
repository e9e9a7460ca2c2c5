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

#include "spq/exact_gaussian.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "spq/errors.hpp"
#include "spq/relation_io.hpp"

namespace spq {

namespace {

std::string token(const std::string& label) {
  std::string out;
  for (char c : label) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  }
  return out;
}

// Rational approximation of the normal quantile (Acklam), relative error
// about 1e-9 before refinement.
double quantile_seed(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00, 2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p < kLow) {
    const double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > 1 - kLow) {
    const double q = std::sqrt(-2 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

struct Gaussian {
  double mu = 0.0;
  double sigma = 0.0;
};

// Mean and deviation of a Gaussian attribute for tuple index idx, or false.
bool lookup(const GaussianColumns& cols, const std::string& attr,
            std::size_t idx, Gaussian* g) {
  auto m = cols.mu.find(attr);
  auto s = cols.sigma.find(attr);
  if (m == cols.mu.end() || s == cols.sigma.end()) return false;
  g->mu = m->second[idx];
  g->sigma = s->second[idx];
  return true;
}

// Fails when the symmetric matrix is not positive semidefinite.
bool positive_semidefinite(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(a[i][i]));
  const double tol = 1e-9 * std::max(scale, 1.0);
  for (std::size_t i = 0; i < n; ++i) a[i][i] += tol;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] <= 0.0) return false;
    const double piv = std::sqrt(a[k][k]);
    for (std::size_t i = k; i < n; ++i) a[i][k] /= piv;
    for (std::size_t j = k + 1; j < n; ++j) {
      for (std::size_t i = j; i < n; ++i) a[i][j] -= a[i][k] * a[j][k];
    }
  }
  return true;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ArgumentError(fmt::format("quantile needs 0 < p < 1, got {}", p));
  }
  double x = quantile_seed(p);
  // Halley refinement against the erfc-based CDF.
  for (int it = 0; it < 2; ++it) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
    x -= u / (1 + x * u / 2);
  }
  return x;
}

Covariance parse_covariance_csv(const std::string& text) {
  Covariance out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      f.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (header) {
      header = false;
      if (f.size() != 4 || f[0] != "i1" || f[1] != "i2" || f[2] != "attr" ||
          f[3] != "value") {
        throw ParseError("covariance header must be i1,i2,attr,value", lineno, 1);
      }
      continue;
    }
    if (f.size() != 4) throw ParseError("expected 4 fields", lineno, 1);
    CovarianceEntry e;
    try {
      std::size_t used = 0;
      const long long i1 = std::stoll(f[0], &used);
      if (used != f[0].size() || i1 < 1) throw std::invalid_argument("i1");
      const long long i2 = std::stoll(f[1], &used);
      if (used != f[1].size() || i2 < 1) throw std::invalid_argument("i2");
      e.value = std::stod(f[3], &used);
      if (used != f[3].size()) throw std::invalid_argument("value");
      e.i1 = static_cast<TupleId>(i1);
      e.i2 = static_cast<TupleId>(i2);
    } catch (const std::exception&) {
      throw ParseError("malformed covariance row", lineno, 1);
    }
    e.attr = f[2];
    out.push_back(std::move(e));
  }
  return out;
}

Covariance read_covariance_csv(const std::string& path) {
  return parse_covariance_csv(read_text_file(path));
}

GaussianColumns gaussian_columns(const Relation& rel) {
  GaussianColumns out;
  const std::size_t n = rel.size();
  for (const std::string& a : rel.stochastic_names()) {
    const VGSpec& s = rel.spec(a);
    std::vector<double> mu(n), sd(n);
    if (s.family == Family::kNormal) {
      for (std::size_t i = 0; i < n; ++i) {
        mu[i] = s.param("mean").at(i);
        sd[i] = s.param("stddev").at(i);
      }
    } else if (s.family == Family::kPointMass) {
      for (std::size_t i = 0; i < n; ++i) mu[i] = s.param("value").at(i);
    } else {
      continue;
    }
    out.mu.emplace(a, std::move(mu));
    out.sigma.emplace(a, std::move(sd));
  }
  return out;
}

double GaussianRow::quadratic_form(const Package& x) const {
  double q = 0.0;
  for (const auto& [id, c] : x.entries()) {
    const double xi = static_cast<double>(c);
    q += sigma2[id - 1] * xi * xi;
  }
  for (const CovarianceEntry& e : cross) {
    q += 2.0 * e.value * static_cast<double>(x.get(e.i1)) *
         static_cast<double>(x.get(e.i2));
  }
  return q;
}

std::size_t GaussianRow::quadratic_terms() const {
  std::size_t n = 1;  // c^2
  for (double s : sigma2) n += s != 0.0;
  for (const CovarianceEntry& e : cross) n += e.value != 0.0;
  return n;
}

std::size_t GaussianRow::coefficient_count() const {
  std::size_t n = 1;  // z_p c, written even when z_p is zero
  for (double m : mu) n += m != 0.0;
  return n + quadratic_terms();
}

std::size_t ExactTranslation::coefficient_count() const {
  std::size_t n = 0;
  for (const LinearRow& r : linear.problem.rows) n += r.coefs.size();
  for (const GaussianRow& g : rows) {
    n -= linear.problem.rows[g.linear_row].coefs.size();
    n += g.coefficient_count();
  }
  return n;
}

std::string ExactTranslation::to_lp() const {
  std::string lp = export_lp(linear.problem);
  if (rows.empty()) return lp;
  const MilpProblem& p = linear.problem;
  std::string quad =
      "\\ Quadratic rows: each pairs with the mean row of the same label\n";
  for (const GaussianRow& g : rows) {
    quad += " q_" + token(g.label) + ": [";
    bool first = true;
    auto term = [&](double a, const std::string& body) {
      if (a == 0.0) return;
      const bool neg = a < 0;
      quad += first ? (neg ? " -" : " ") : (neg ? " - " : " + ");
      quad += fmt::format("{} {}", std::fabs(a), body);
      first = false;
    };
    for (std::size_t i = 0; i < g.sigma2.size(); ++i) {
      term(g.sigma2[i], p.vars[linear.x_var[i]].name + " ^ 2");
    }
    for (const CovarianceEntry& e : g.cross) {
      term(2.0 * e.value, p.vars[linear.x_var[e.i1 - 1]].name + " * " +
                              p.vars[linear.x_var[e.i2 - 1]].name);
    }
    term(-1.0, p.vars[g.c_var].name + " ^ 2");
    quad += " ] <= 0\n";
  }
  const auto at = lp.find("Bounds\n");
  lp.insert(at == std::string::npos ? lp.size() : at, quad);
  return lp;
}

ExactTranslation translate_exact(const QueryIR& q_in, const Relation& rel,
                                 const GaussianColumns& cols,
                                 const Covariance* covariance,
                                 const MeanColumns& other_means,
                                 const FormulationOptions& opts) {
  const QueryIR q = q_in.canonical ? q_in : canonicalize(q_in, rel);
  if (q.objective.kind == ObjectiveKind::kProbability) {
    throw NotApplicableError(
        "exact translation covers chance constraints, not probability "
        "objectives");
  }
  const std::size_t n = rel.size();

  // Means of every stochastic attribute used anywhere.
  MeanColumns means = other_means;
  for (const auto& [a, col] : cols.mu) means[a] = col;

  std::vector<std::size_t> prob;
  for (std::size_t k = 0; k < q.constraints.size(); ++k) {
    const Constraint& c = q.constraints[k];
    if (!c.is_probabilistic()) continue;
    if (c.cmp == Cmp::kEq) {
      throw NotApplicableError("chance constraint '" + c.label +
                               "' uses '=', which has probability zero");
    }
    const double p = c.prob->value();
    if (p < 0.5) {
      throw NonConvexError(fmt::format(
          "chance constraint '{}' has p = {} < 0.5; the exact form is not "
          "convex",
          c.label, p));
    }
    for (const Term& t : c.inner.terms) {
      if (rel.is_stochastic(t.attr) &&
          (!cols.mu.count(t.attr) || !cols.sigma.count(t.attr))) {
        throw NotApplicableError("attribute '" + t.attr +
                                 "' is not declared Gaussian");
      }
    }
    prob.push_back(k);
  }

  ExactTranslation out;
  out.linear = formulate_base(q, rel, ScenarioSet{}, 0, means, opts);
  out.warnings = out.linear.warnings;
  MilpProblem& mp = out.linear.problem;

  // Covariance entries keyed by (attr, i1 < i2); diagonal entries override
  // the variance column.
  std::map<std::pair<std::string, std::pair<TupleId, TupleId>>, double> cov;
  if (covariance != nullptr) {
    for (const CovarianceEntry& e : *covariance) {
      if (e.i1 > n || e.i2 > n) {
        throw ArgumentError(fmt::format(
            "covariance entry ({}, {}) is outside 1..{}", e.i1, e.i2, n));
      }
      if (!cols.sigma.count(e.attr)) {
        throw NotApplicableError("covariance given for non-Gaussian attribute '" +
                                 e.attr + "'");
      }
      auto key = std::make_pair(
          e.attr, std::make_pair(std::min(e.i1, e.i2), std::max(e.i1, e.i2)));
      auto [it, fresh] = cov.emplace(key, e.value);
      if (!fresh && it->second != e.value) {
        throw ArgumentError(fmt::format(
            "covariance entry ({}, {}) for '{}' is not symmetric", e.i1, e.i2,
            e.attr));
      }
    }
  }

  for (std::size_t k : prob) {
    const Constraint& c = q.constraints[k];
    GaussianRow g;
    g.index = k;
    g.label = c.label.empty() ? "r" + std::to_string(k + 1) : c.label;
    g.p = c.prob->value();
    g.z_p = g.p == 0.5 ? 0.0 : normal_quantile(g.p);
    g.negated = c.cmp == Cmp::kLe;
    const double sign = g.negated ? -1.0 : 1.0;
    g.v = sign * c.rhs;
    g.mu.assign(n, 0.0);
    g.sigma2.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double mu = c.inner.constant;
      double var = 0.0;
      if (!q.is_excluded(i + 1)) {
        for (const Term& t : c.inner.terms) {
          Gaussian gs;
          if (rel.is_deterministic(t.attr)) {
            mu += t.coef * rel.column(t.attr)[i];
          } else if (lookup(cols, t.attr, i, &gs)) {
            double s2 = gs.sigma * gs.sigma;
            if (auto it = cov.find({t.attr, {i + 1, i + 1}}); it != cov.end()) {
              s2 = it->second;
            }
            mu += t.coef * gs.mu;
            var += t.coef * t.coef * s2;
          }
        }
      }
      g.mu[i] = sign * mu;
      g.sigma2[i] = var;
    }
    for (const auto& [key, value] : cov) {
      const auto [i1, i2] = key.second;
      if (i1 == i2 || q.is_excluded(i1) || q.is_excluded(i2)) continue;
      double coef = 0.0;
      for (const Term& t : c.inner.terms) {
        if (t.attr == key.first) coef = t.coef;
      }
      if (coef == 0.0 || value == 0.0) continue;
      g.cross.push_back({i1, i2, key.first, coef * coef * value});
    }
    if (g.correlated()) {
      std::vector<TupleId> ids;
      for (const CovarianceEntry& e : g.cross) {
        ids.push_back(e.i1);
        ids.push_back(e.i2);
      }
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      std::vector<std::vector<double>> m(ids.size(),
                                         std::vector<double>(ids.size(), 0.0));
      auto pos = [&](TupleId id) {
        return static_cast<std::size_t>(
            std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
      };
      for (std::size_t a = 0; a < ids.size(); ++a) m[a][a] = g.sigma2[ids[a] - 1];
      for (const CovarianceEntry& e : g.cross) {
        m[pos(e.i1)][pos(e.i2)] += e.value;
        m[pos(e.i2)][pos(e.i1)] += e.value;
      }
      if (!positive_semidefinite(std::move(m))) {
        throw NumericsError("covariance for '" + g.label +
                            "' is not positive semidefinite");
      }
    }

    MilpVar cv;
    cv.name = "c_" + token(g.label);
    cv.lo = 0.0;
    cv.hi = kInf;
    cv.integer = false;
    cv.role = VarRole::kAuxiliary;
    g.c_var = mp.add_var(cv);
    LinearRow row;
    row.name = token(g.label);
    for (std::size_t i = 0; i < n; ++i) {
      if (g.mu[i] != 0.0) row.coefs.emplace_back(out.linear.x_var[i], g.mu[i]);
    }
    row.coefs.emplace_back(g.c_var, -g.z_p);
    row.cmp = Cmp::kGe;
    row.rhs = g.v;
    g.linear_row = static_cast<int>(mp.rows.size());
    mp.add_row(std::move(row));
    out.rows.push_back(std::move(g));
  }
  return out;
}

bool check_exact_feasible(const Package& x, const GaussianRow& row) {
  const double q = row.quadratic_form(x);
  double scale = 0.0;
  for (const auto& [id, c] : x.entries()) {
    scale += row.sigma2[id - 1] * static_cast<double>(c) * static_cast<double>(c);
  }
  if (q < -1e-9 * std::max(1.0, scale)) {
    throw NumericsError(fmt::format(
        "quadratic form for '{}' is negative ({}); covariance is invalid",
        row.label, q));
  }
  double lhs = 0.0;
  for (const auto& [id, c] : x.entries()) {
    lhs += row.mu[id - 1] * static_cast<double>(c);
  }
  return lhs >= row.v + row.z_p * std::sqrt(std::max(0.0, q));
}

}  // namespace spq

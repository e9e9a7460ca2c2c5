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

#include "spq/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "simplex.hpp"
#include "spq/errors.hpp"

namespace spq {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kFeasTol = 1e-6;

bool row_holds(double act, Cmp cmp, double rhs, double tol) {
  switch (cmp) {
    case Cmp::kLe: return act <= rhs + tol;
    case Cmp::kGe: return act >= rhs - tol;
    case Cmp::kEq: return std::fabs(act - rhs) <= tol;
  }
  return false;
}

double activity(const SparseRow& row, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& [j, a] : row) s += a * x[j];
  return s;
}

void check_bounded(const MilpProblem& p) {
  for (const MilpVar& v : p.vars) {
    if (!std::isfinite(v.lo) || !std::isfinite(v.hi)) {
      throw UnboundedError("variable '" + v.name +
                           "' has an infinite bound; set a repeat limit, a "
                           "COUNT upper bound or a default cap");
    }
  }
}

// min sum s_j x_j over the box (and optionally one nonnegative <= row).
double box_min(const MilpProblem& p, const SparseRow& s) {
  double v = 0.0;
  for (const auto& [j, c] : s) {
    const MilpVar& var = p.vars[j];
    double b = c >= 0 ? var.lo : var.hi;
    if (!std::isfinite(b)) {
      throw UnboundedError("variable '" + var.name +
                           "' is unbounded in an indicator row");
    }
    v += c * b;
  }
  return v;
}

std::optional<double> knapsack_min(const MilpProblem& p, const SparseRow& s,
                                   const LinearRow& row) {
  if (row.cmp == Cmp::kGe || !std::isfinite(row.rhs)) return std::nullopt;
  std::vector<double> weight(p.vars.size(), 0.0);
  for (const auto& [j, a] : row.coefs) {
    if (a < 0) return std::nullopt;
    weight[j] += a;
  }
  double cap = row.rhs;
  for (const auto& [j, a] : row.coefs) cap -= a * p.vars[j].lo;
  if (cap < 0) return std::nullopt;
  double value = 0.0;
  struct Item {
    double ratio;
    int j;
    double s;
  };
  std::vector<Item> items;
  for (const auto& [j, c] : s) {
    const MilpVar& var = p.vars[j];
    value += c * var.lo;
    if (c >= 0) continue;
    if (weight[j] == 0.0) {
      value += c * (var.hi - var.lo);
    } else {
      items.push_back({c / weight[j], j, c});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.ratio < b.ratio || (a.ratio == b.ratio && a.j < b.j);
  });
  for (const Item& it : items) {
    if (cap <= 0) break;
    const MilpVar& var = p.vars[it.j];
    double t = std::min(var.hi - var.lo, cap / weight[it.j]);
    value += it.s * t;
    cap -= weight[it.j] * t;
  }
  return value;
}

double inner_min(const MilpProblem& p, const SparseRow& s) {
  double lb = box_min(p, s);
  for (const LinearRow& row : p.rows) {
    if (auto k = knapsack_min(p, s, row)) lb = std::max(lb, *k);
  }
  return lb;
}

SparseRow negated(const SparseRow& r) {
  SparseRow out = r;
  for (auto& [j, a] : out) a = -a;
  return out;
}

}  // namespace

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeLimitBest: return "time_limit_best";
    case SolveStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

int MilpProblem::add_var(MilpVar v, double obj) {
  vars.push_back(std::move(v));
  objective.push_back(obj);
  return static_cast<int>(vars.size()) - 1;
}

std::size_t MilpProblem::nonzeros() const {
  std::size_t nz = 0;
  for (const LinearRow& r : rows) {
    for (const auto& [j, a] : r.coefs) nz += a != 0.0;
  }
  for (const IndicatorRow& r : indicators) {
    for (const auto& [j, a] : r.coefs) nz += a != 0.0;
    nz += 1;
  }
  return nz;
}

double MilpProblem::evaluate(const std::vector<double>& values) const {
  double s = objective_constant;
  for (std::size_t j = 0; j < vars.size(); ++j) s += objective[j] * values[j];
  return s;
}

bool MilpProblem::feasible(const std::vector<double>& x, double tol) const {
  if (x.size() != vars.size()) return false;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const MilpVar& v = vars[j];
    if (x[j] < v.lo - tol || x[j] > v.hi + tol) return false;
    if (v.integer && std::fabs(x[j] - std::round(x[j])) > tol) return false;
  }
  for (const LinearRow& r : rows) {
    if (!row_holds(activity(r.coefs, x), r.cmp, r.rhs, tol)) return false;
  }
  for (const IndicatorRow& r : indicators) {
    if (x[r.indicator] > 0.5 &&
        !row_holds(activity(r.coefs, x), r.cmp, r.rhs, tol)) {
      return false;
    }
  }
  return true;
}

bool propagate_bounds(MilpProblem& p, int passes) {
  auto tighten_hi = [&](int j, double v) {
    MilpVar& var = p.vars[j];
    if (var.integer) v = std::floor(v + 1e-9);
    if (v < var.hi - 1e-12) {
      var.hi = v;
      var.capped = false;
      return true;
    }
    return false;
  };
  auto tighten_lo = [&](int j, double v) {
    MilpVar& var = p.vars[j];
    if (var.integer) v = std::ceil(v - 1e-9);
    if (v > var.lo + 1e-12) {
      var.lo = v;
      return true;
    }
    return false;
  };
  for (int pass = 0; pass < passes; ++pass) {
    bool changed = false;
    for (const LinearRow& row : p.rows) {
      for (int side = 0; side < 2; ++side) {
        // side 0: sum a x <= rhs; side 1: sum a x >= rhs as -sum a x <= -rhs.
        if (side == 0 && row.cmp == Cmp::kGe) continue;
        if (side == 1 && row.cmp == Cmp::kLe) continue;
        const double sign = side == 0 ? 1.0 : -1.0;
        const double rhs = sign * row.rhs;
        double minact = 0.0;
        int infinite = 0;
        int inf_j = -1;
        for (const auto& [j, a0] : row.coefs) {
          double a = sign * a0;
          double b = a > 0 ? p.vars[j].lo : p.vars[j].hi;
          if (a == 0.0) continue;
          if (!std::isfinite(b)) {
            ++infinite;
            inf_j = j;
          } else {
            minact += a * b;
          }
        }
        if (infinite == 0 && minact > rhs + kFeasTol * std::max(1.0, std::fabs(rhs))) {
          return false;
        }
        if (infinite > 1) continue;
        for (const auto& [j, a0] : row.coefs) {
          double a = sign * a0;
          if (a == 0.0) continue;
          if (infinite == 1 && j != inf_j) continue;
          double own = a > 0 ? a * p.vars[j].lo : a * p.vars[j].hi;
          double rest = infinite == 1 ? minact : minact - own;
          double bound = (rhs - rest) / a;
          changed |= a > 0 ? tighten_hi(j, bound) : tighten_lo(j, bound);
        }
      }
    }
    for (const MilpVar& v : p.vars) {
      if (v.lo > v.hi + 1e-9) return false;
    }
    if (!changed) break;
  }
  return true;
}

double big_m(const MilpProblem& p, const IndicatorRow& ind) {
  if (ind.cmp == Cmp::kGe) {
    return std::max(0.0, ind.rhs - inner_min(p, ind.coefs));
  }
  if (ind.cmp == Cmp::kLe) {
    return std::max(0.0, -inner_min(p, negated(ind.coefs)) - ind.rhs);
  }
  throw ArgumentError("indicator rows must use <= or >=");
}

MilpProblem linearize(const MilpProblem& in) {
  MilpProblem p = in;
  p.indicators.clear();
  propagate_bounds(p);
  check_bounded(p);
  for (const IndicatorRow& ind : in.indicators) {
    MilpVar& y = p.vars[ind.indicator];
    y.lo = std::max(y.lo, 0.0);
    y.hi = std::min(y.hi, 1.0);
    y.integer = true;
    const double m = big_m(p, ind);
    LinearRow row;
    row.name = ind.name;
    row.coefs = ind.coefs;
    row.cmp = ind.cmp;
    if (m > 0.0) {
      if (ind.cmp == Cmp::kGe) {
        row.coefs.emplace_back(ind.indicator, -m);
        row.rhs = ind.rhs - m;
      } else {
        row.coefs.emplace_back(ind.indicator, m);
        row.rhs = ind.rhs + m;
      }
    } else {
      row.rhs = ind.rhs;
    }
    p.rows.push_back(std::move(row));
  }
  return p;
}

namespace {

struct Node {
  std::vector<double> lo, hi;
  internal::Basis basis;
  double bound;
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpProblem& p, const SolverOptions& opts)
      : p_(p), opts_(opts) {
    const int n = static_cast<int>(p.vars.size());
    lp_.n = n;
    lp_.m = static_cast<int>(p.rows.size());
    lp_.a.assign(static_cast<std::size_t>(lp_.m) * n, 0.0);
    for (int i = 0; i < lp_.m; ++i) {
      const LinearRow& r = p.rows[i];
      for (const auto& [j, a] : r.coefs) {
        lp_.a[static_cast<std::size_t>(i) * n + j] += a;
      }
      lp_.row_lo.push_back(r.cmp == Cmp::kLe ? -kInf : r.rhs);
      lp_.row_hi.push_back(r.cmp == Cmp::kGe ? kInf : r.rhs);
    }
    const double sign = p.sense == Sense::kMaximize ? -1.0 : 1.0;
    integral_objective_ = true;
    for (int j = 0; j < n; ++j) {
      lp_.c.push_back(sign * p.objective[j]);
      if (p.objective[j] != 0.0 &&
          (!p.vars[j].integer ||
           p.objective[j] != std::round(p.objective[j]))) {
        integral_objective_ = false;
      }
    }
  }

  MilpSolution run() {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    MilpSolution sol;
    const int n = lp_.n;
    internal::DualSimplex simplex(lp_);
    const std::size_t iter_limit =
        200 * static_cast<std::size_t>(lp_.m + n) + 1000;

    std::vector<Node> stack;
    Node root;
    for (const MilpVar& v : p_.vars) {
      root.lo.push_back(v.lo);
      root.hi.push_back(v.hi);
    }
    root.bound = -kInf;
    stack.push_back(std::move(root));
    bool limit_hit = false;

    while (!stack.empty()) {
      if ((opts_.node_limit > 0 && sol.nodes >= opts_.node_limit) ||
          (opts_.time_limit_s > 0 &&
           std::chrono::duration<double>(clock::now() - start).count() >
               opts_.time_limit_s)) {
        limit_hit = true;
        break;
      }
      Node node = std::move(stack.back());
      stack.pop_back();
      if (pruned(node.bound)) continue;
      ++sol.nodes;
      internal::LpResult lp = simplex.solve(
          node.lo, node.hi, node.basis.empty() ? nullptr : &node.basis,
          iter_limit);
      sol.lp_iterations += lp.iterations;
      if (lp.status == internal::LpStatus::kIterationLimit) {
        lp = simplex.solve(node.lo, node.hi, nullptr, iter_limit * 4);
        sol.lp_iterations += lp.iterations;
      }
      if (lp.status == internal::LpStatus::kInfeasible) continue;
      if (lp.status == internal::LpStatus::kIterationLimit) {
        // Cannot bound this node; fall back to branching on the box.
        lp.objective = node.bound;
        lp.x = node.lo;
      }
      if (pruned(lp.objective)) continue;

      int branch = -1;
      double best_frac = 0.0;
      for (int j = 0; j < n; ++j) {
        if (!p_.vars[j].integer) continue;
        double f = lp.x[j] - std::floor(lp.x[j]);
        double dist = std::min(f, 1.0 - f);
        if (dist > kIntTol && dist > best_frac + 1e-12) {
          best_frac = dist;
          branch = j;
        }
      }
      if (lp.status == internal::LpStatus::kIterationLimit) {
        for (int j = 0; j < n && branch < 0; ++j) {
          if (p_.vars[j].integer && node.hi[j] > node.lo[j]) branch = j;
        }
        if (branch < 0) {
          try_incumbent(lp.x);
          continue;
        }
        lp.x[branch] = node.lo[branch] + 0.5;
      }
      if (branch < 0) {
        try_incumbent(lp.x);
        continue;
      }
      if (sol.nodes == 1 || sol.nodes % 64 == 0) round_heuristic(lp.x);

      const double v = lp.x[branch];
      Node down{node.lo, node.hi, lp.basis, lp.objective};
      down.hi[branch] = std::floor(v);
      Node up{std::move(node.lo), std::move(node.hi), std::move(lp.basis),
              lp.objective};
      up.lo[branch] = std::ceil(v);
      const bool down_first = v - std::floor(v) < 0.5;
      if (down_first) {
        stack.push_back(std::move(up));
        stack.push_back(std::move(down));
      } else {
        stack.push_back(std::move(down));
        stack.push_back(std::move(up));
      }
    }

    sol.has_incumbent = has_incumbent_;
    if (has_incumbent_) {
      sol.values = incumbent_;
      sol.objective = p_.evaluate(incumbent_);
    }
    if (limit_hit) {
      sol.status = SolveStatus::kTimeLimitBest;
    } else if (has_incumbent_) {
      sol.status = SolveStatus::kOptimal;
      for (std::size_t j = 0; j < p_.vars.size(); ++j) {
        if (p_.vars[j].capped && incumbent_[j] >= p_.vars[j].hi - 0.5) {
          sol.status = SolveStatus::kUnbounded;
        }
      }
    } else {
      sol.status = SolveStatus::kInfeasible;
    }
    return sol;
  }

 private:
  // Minimization-form objective of an integer assignment.
  double min_form(const std::vector<double>& x) const {
    double s = 0.0;
    for (int j = 0; j < lp_.n; ++j) s += lp_.c[j] * x[j];
    return s;
  }

  bool pruned(double bound) const {
    if (!has_incumbent_ || !std::isfinite(bound)) return false;
    if (integral_objective_) {
      return std::ceil(bound - 1e-6) >= best_ - 1e-9;
    }
    return bound >= best_ - 1e-9 * std::max(1.0, std::fabs(best_));
  }

  void try_incumbent(const std::vector<double>& x) {
    std::vector<double> r = x;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (p_.vars[j].integer) r[j] = std::round(r[j]);
    }
    if (!p_.feasible(r, kFeasTol)) return;
    double v = min_form(r);
    if (!has_incumbent_ || v < best_ ||
        (v == best_ && r < incumbent_)) {
      has_incumbent_ = true;
      best_ = v;
      incumbent_ = std::move(r);
    }
  }

  void round_heuristic(const std::vector<double>& x) {
    std::vector<double> r = x;
    for (int mode = 0; mode < 3; ++mode) {
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (!p_.vars[j].integer) continue;
        r[j] = mode == 0 ? std::round(x[j])
                         : (mode == 1 ? std::floor(x[j] + kIntTol)
                                      : std::ceil(x[j] - kIntTol));
      }
      try_incumbent(r);
    }
  }

  const MilpProblem& p_;
  SolverOptions opts_;
  internal::LpData lp_;
  bool integral_objective_ = false;
  bool has_incumbent_ = false;
  double best_ = 0.0;
  std::vector<double> incumbent_;
};

}  // namespace

MilpSolution solve(const MilpProblem& problem, const SolverOptions& opts) {
  MilpProblem p = linearize(problem);
  MilpSolution infeasible;
  infeasible.status = SolveStatus::kInfeasible;
  for (const MilpVar& v : p.vars) {
    if (v.lo > v.hi + 1e-9) return infeasible;
  }
  MilpSolution sol = BranchAndBound(p, opts).run();
  if (sol.has_incumbent) sol.objective = problem.evaluate(sol.values);
  return sol;
}

}  // namespace spq

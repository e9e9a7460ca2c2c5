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

#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spq::internal {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 64;
constexpr int kStallWindow = 60;

double feas_tol(double bound) {
  return kPrimalTol * std::max(1.0, std::fabs(bound));
}

}  // namespace

DualSimplex::DualSimplex(const LpData& lp)
    : lp_(lp), m_(lp.m), n_(lp.n) {}

double DualSimplex::lower(int j) const { return lo_[j]; }
double DualSimplex::upper(int j) const { return hi_[j]; }

double DualSimplex::column_dot(const double* row, int j) const {
  if (j >= n_) return -row[j - n_];
  double s = 0.0;
  for (int i = 0; i < m_; ++i) s += row[i] * lp_.at(i, j);
  return s;
}

void DualSimplex::column(int j, std::vector<double>& out) const {
  out.assign(m_, 0.0);
  if (j >= n_) {
    out[j - n_] = -1.0;
    return;
  }
  for (int i = 0; i < m_; ++i) out[i] = lp_.at(i, j);
}

void DualSimplex::slack_basis() {
  head_.resize(m_);
  state_.assign(n_ + m_, VarState::kAtLower);
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    state_[n_ + i] = VarState::kBasic;
  }
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = -1.0;
}

bool DualSimplex::refactor() {
  const std::size_t mm = static_cast<std::size_t>(m_);
  std::vector<double> b(mm * mm, 0.0);
  std::vector<double> col;
  for (int r = 0; r < m_; ++r) {
    column(head_[r], col);
    for (int i = 0; i < m_; ++i) b[i * mm + r] = col[i];
  }
  std::vector<double> inv(mm * mm, 0.0);
  for (std::size_t i = 0; i < mm; ++i) inv[i * mm + i] = 1.0;
  for (std::size_t k = 0; k < mm; ++k) {
    std::size_t piv = k;
    double best = std::fabs(b[k * mm + k]);
    for (std::size_t i = k + 1; i < mm; ++i) {
      double v = std::fabs(b[i * mm + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-12) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < mm; ++j) {
        std::swap(b[k * mm + j], b[piv * mm + j]);
        std::swap(inv[k * mm + j], inv[piv * mm + j]);
      }
    }
    double p = b[k * mm + k];
    for (std::size_t j = 0; j < mm; ++j) {
      b[k * mm + j] /= p;
      inv[k * mm + j] /= p;
    }
    for (std::size_t i = 0; i < mm; ++i) {
      if (i == k) continue;
      double f = b[i * mm + k];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < mm; ++j) {
        b[i * mm + j] -= f * b[k * mm + j];
        inv[i * mm + j] -= f * inv[k * mm + j];
      }
    }
  }
  binv_ = std::move(inv);
  return true;
}

void DualSimplex::compute_primal() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == VarState::kBasic) continue;
    value_[j] = state_[j] == VarState::kAtLower ? lo_[j] : hi_[j];
    double v = value_[j];
    if (v == 0.0) continue;
    if (j >= n_) {
      rhs[j - n_] += v;
    } else {
      for (int i = 0; i < m_; ++i) rhs[i] -= lp_.at(i, j) * v;
    }
  }
  xb_.assign(m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    const double* row = &binv_[static_cast<std::size_t>(r) * m_];
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += row[i] * rhs[i];
    xb_[r] = s;
    value_[head_[r]] = s;
  }
}

void DualSimplex::compute_duals() {
  pi_.assign(m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    int h = head_[r];
    double cb = h < n_ ? lp_.c[h] : 0.0;
    if (cb == 0.0) continue;
    const double* row = &binv_[static_cast<std::size_t>(r) * m_];
    for (int i = 0; i < m_; ++i) pi_[i] += cb * row[i];
  }
  d_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == VarState::kBasic) continue;
    double cj = j < n_ ? lp_.c[j] : 0.0;
    d_[j] = cj - column_dot(pi_.data(), j);
  }
}

void DualSimplex::fix_dual_infeasibility() {
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == VarState::kBasic) continue;
    if (lo_[j] == hi_[j]) {
      state_[j] = VarState::kAtLower;
      continue;
    }
    if (state_[j] == VarState::kAtLower && d_[j] < -kDualTol &&
        std::isfinite(hi_[j])) {
      state_[j] = VarState::kAtUpper;
    } else if (state_[j] == VarState::kAtUpper && d_[j] > kDualTol &&
               std::isfinite(lo_[j])) {
      state_[j] = VarState::kAtLower;
    }
    if (state_[j] == VarState::kAtLower && !std::isfinite(lo_[j])) {
      state_[j] = VarState::kAtUpper;
    } else if (state_[j] == VarState::kAtUpper && !std::isfinite(hi_[j])) {
      state_[j] = VarState::kAtLower;
    }
  }
}

LpResult DualSimplex::solve(const std::vector<double>& col_lo,
                            const std::vector<double>& col_hi,
                            const Basis* warm, std::size_t iteration_limit) {
  LpResult res;
  lo_.assign(n_ + m_, 0.0);
  hi_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = col_lo[j];
    hi_[j] = col_hi[j];
    if (lo_[j] > hi_[j] + 1e-12) {
      res.status = LpStatus::kInfeasible;
      return res;
    }
  }
  for (int i = 0; i < m_; ++i) {
    lo_[n_ + i] = lp_.row_lo[i];
    hi_[n_ + i] = lp_.row_hi[i];
  }
  value_.assign(n_ + m_, 0.0);

  bool warm_ok = false;
  if (warm != nullptr && !warm->empty() &&
      static_cast<int>(warm->head.size()) == m_) {
    head_ = warm->head;
    state_ = warm->state;
    warm_ok = refactor();
  }
  if (!warm_ok) slack_basis();

  bool bland = false;
  double last_obj = -std::numeric_limits<double>::infinity();
  int stall = 0;
  std::vector<double> alpha_row(n_ + m_, 0.0);
  std::vector<double> col, alpha_q;
  std::size_t since_refactor = 0;

  for (std::size_t iter = 0;; ++iter) {
    if (iter >= iteration_limit) {
      res.status = LpStatus::kIterationLimit;
      res.iterations = iter;
      return res;
    }
    if (since_refactor >= kRefactorEvery) {
      if (!refactor()) slack_basis();
      since_refactor = 0;
    }
    compute_duals();
    fix_dual_infeasibility();
    compute_primal();

    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += lp_.c[j] * value_[j];
    if (obj > last_obj + 1e-12 * (1.0 + std::fabs(obj))) {
      last_obj = obj;
      stall = 0;
    } else if (++stall > kStallWindow) {
      bland = true;
    }

    // Leaving row.
    int r = -1;
    double best = 0.0;
    for (int i = 0; i < m_; ++i) {
      int h = head_[i];
      double v = xb_[i];
      double viol = 0.0;
      if (v < lo_[h] - feas_tol(lo_[h])) {
        viol = lo_[h] - v;
      } else if (v > hi_[h] + feas_tol(hi_[h])) {
        viol = v - hi_[h];
      }
      if (viol <= 0.0) continue;
      if (bland) {
        if (r < 0 || h < head_[r]) r = i;
      } else if (viol > best) {
        best = viol;
        r = i;
      }
    }
    if (r < 0) {
      res.status = LpStatus::kOptimal;
      res.iterations = iter;
      res.x.assign(value_.begin(), value_.begin() + n_);
      res.objective = obj;
      res.basis.head = head_;
      res.basis.state = state_;
      return res;
    }
    const int p = head_[r];
    const bool to_lower = xb_[r] < lo_[p];
    const double* rho = &binv_[static_cast<std::size_t>(r) * m_];

    // Ratio test (Harris two-pass, or Bland's smallest index).
    double theta_max = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_ + m_; ++j) {
      alpha_row[j] = 0.0;
      if (state_[j] == VarState::kBasic || lo_[j] == hi_[j]) continue;
      double a = column_dot(rho, j);
      double at = to_lower ? -a : a;
      alpha_row[j] = at;
      bool cand = (state_[j] == VarState::kAtLower && at > kPivotTol) ||
                  (state_[j] == VarState::kAtUpper && at < -kPivotTol);
      if (!cand) continue;
      double ratio = (std::fabs(d_[j]) + kDualTol) / std::fabs(at);
      theta_max = std::min(theta_max, ratio);
    }
    int q = -1;
    if (std::isfinite(theta_max)) {
      double best_alpha = 0.0;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n_ + m_; ++j) {
        double at = alpha_row[j];
        if (at == 0.0) continue;
        bool cand = (state_[j] == VarState::kAtLower && at > kPivotTol) ||
                    (state_[j] == VarState::kAtUpper && at < -kPivotTol);
        if (!cand) continue;
        double ratio = std::fabs(d_[j]) / std::fabs(at);
        if (bland) {
          if (ratio < best_ratio - 1e-12) {
            best_ratio = ratio;
            q = j;
          }
        } else if (ratio <= theta_max && std::fabs(at) > best_alpha) {
          best_alpha = std::fabs(at);
          q = j;
        }
      }
    }
    if (q < 0) {
      res.status = LpStatus::kInfeasible;
      res.iterations = iter;
      return res;
    }

    // Pivot.
    column(q, col);
    alpha_q.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      double s = 0.0;
      for (int k = 0; k < m_; ++k) s += row[k] * col[k];
      alpha_q[i] = s;
    }
    const double piv = alpha_q[r];
    if (std::fabs(piv) < 1e-11) {
      if (!refactor()) slack_basis();
      since_refactor = 0;
      bland = true;
      continue;
    }
    double* prow = &binv_[static_cast<std::size_t>(r) * m_];
    for (int k = 0; k < m_; ++k) prow[k] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha_q[i] == 0.0) continue;
      double f = alpha_q[i];
      double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    head_[r] = q;
    state_[q] = VarState::kBasic;
    state_[p] = to_lower ? VarState::kAtLower : VarState::kAtUpper;
    ++since_refactor;
  }
}

}  // namespace spq::internal

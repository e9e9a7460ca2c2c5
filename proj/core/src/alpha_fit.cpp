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

#include "spq/alpha_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "spq/errors.hpp"

namespace spq {

namespace {

constexpr int kParams = 4;
using Vec4 = std::array<double, kParams>;

double eval(const Vec4& t, double x) {
  return t[0] * std::atan(t[1] * x + t[2]) + t[3];
}

double sse(const Vec4& t, std::span<const AlphaPoint> pts) {
  double s = 0.0;
  for (const AlphaPoint& p : pts) {
    const double e = eval(t, p.alpha) - p.surplus;
    s += e * e;
  }
  return s;
}

// Solves the 4x4 system (A) x = g by Gaussian elimination; false if singular.
bool solve4(std::array<Vec4, kParams> a, Vec4 g, Vec4* x) {
  for (int col = 0; col < kParams; ++col) {
    int piv = col;
    for (int r = col + 1; r < kParams; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) < 1e-300) return false;
    std::swap(a[col], a[piv]);
    std::swap(g[col], g[piv]);
    for (int r = col + 1; r < kParams; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < kParams; ++c) a[r][c] -= f * a[col][c];
      g[r] -= f * g[col];
    }
  }
  for (int r = kParams - 1; r >= 0; --r) {
    double s = g[r];
    for (int c = r + 1; c < kParams; ++c) s -= a[r][c] * (*x)[c];
    (*x)[r] = s / a[r][r];
  }
  return true;
}

Vec4 levenberg_marquardt(Vec4 t, std::span<const AlphaPoint> pts) {
  double lambda = 1e-3;
  double cur = sse(t, pts);
  for (int it = 0; it < 200; ++it) {
    std::array<Vec4, kParams> jtj{};
    Vec4 jtr{};
    for (const AlphaPoint& p : pts) {
      const double u = t[1] * p.alpha + t[2];
      const double den = 1.0 + u * u;
      const Vec4 jac = {std::atan(u), t[0] * p.alpha / den, t[0] / den, 1.0};
      const double res = p.surplus - eval(t, p.alpha);
      for (int i = 0; i < kParams; ++i) {
        jtr[i] += jac[i] * res;
        for (int j = 0; j < kParams; ++j) jtj[i][j] += jac[i] * jac[j];
      }
    }
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      std::array<Vec4, kParams> a = jtj;
      for (int i = 0; i < kParams; ++i) a[i][i] += lambda * (1.0 + jtj[i][i]);
      Vec4 step{};
      if (!solve4(a, jtr, &step)) {
        lambda *= 10;
        continue;
      }
      Vec4 next = t;
      for (int i = 0; i < kParams; ++i) next[i] += step[i];
      const double s = sse(next, pts);
      if (std::isfinite(s) && s < cur) {
        const double gain = cur - s;
        t = next;
        cur = s;
        lambda = std::max(lambda / 10, 1e-12);
        improved = true;
        if (gain < 1e-15 * (1.0 + cur)) return t;
      } else {
        lambda *= 10;
      }
    }
    if (!improved) break;
  }
  return t;
}

double linear_root(std::vector<AlphaPoint> pts, bool* found) {
  std::sort(pts.begin(), pts.end(), [](const AlphaPoint& a, const AlphaPoint& b) {
    return a.alpha < b.alpha || (a.alpha == b.alpha && a.surplus < b.surplus);
  });
  // Largest alpha with r < 0 followed by the first later point with r >= 0.
  for (std::size_t i = pts.size(); i-- > 0;) {
    if (pts[i].surplus >= 0) continue;
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[j].surplus >= 0 && pts[j].alpha > pts[i].alpha) {
        *found = true;
        const double t = -pts[i].surplus / (pts[j].surplus - pts[i].surplus);
        return pts[i].alpha + t * (pts[j].alpha - pts[i].alpha);
      }
    }
    break;
  }
  *found = false;
  return 0.0;
}

}  // namespace

double ArctanFit::operator()(double alpha) const {
  return eval({a, b, c, d}, alpha);
}

bool ArctanFit::root(double* alpha) const {
  if (!ok || a == 0.0 || b == 0.0) return false;
  const double ratio = -d / a;
  if (std::fabs(ratio) >= std::numbers::pi / 2) return false;
  *alpha = (std::tan(ratio) - c) / b;
  return std::isfinite(*alpha);
}

ArctanFit fit_arctan(std::span<const AlphaPoint> pts) {
  ArctanFit best;
  if (pts.size() < kParams) return best;
  double lo = pts[0].surplus, hi = pts[0].surplus;
  double amin = pts[0].alpha, amax = pts[0].alpha;
  for (const AlphaPoint& p : pts) {
    lo = std::min(lo, p.surplus);
    hi = std::max(hi, p.surplus);
    amin = std::min(amin, p.alpha);
    amax = std::max(amax, p.alpha);
  }
  if (hi - lo < 1e-12 || amax - amin < 1e-12) return best;
  const double mid = 0.5 * (amin + amax);
  best.sse = std::numeric_limits<double>::infinity();
  for (double scale : {1.0, 5.0, 25.0}) {
    const double b0 = scale / (amax - amin);
    const Vec4 start = {(hi - lo) / 2.0, b0, -b0 * mid, 0.5 * (hi + lo)};
    const Vec4 t = levenberg_marquardt(start, pts);
    const double s = sse(t, pts);
    if (std::isfinite(s) && s < best.sse) {
      best = {t[0], t[1], t[2], t[3], s, true};
    }
  }
  return best;
}

double ceil_to_grid(double alpha, std::size_t z, std::size_t m) {
  if (z == 0 || m == 0 || z > m) throw ArgumentError("need 1 <= Z <= M");
  const double step = static_cast<double>(z) / static_cast<double>(m);
  const std::size_t top = (m + z - 1) / z;
  double q = std::ceil(alpha / step - 1e-6);
  q = std::clamp(q, 1.0, static_cast<double>(top));
  return std::min(1.0, q * step);
}

AlphaGuess guess_alpha(std::span<const AlphaPoint> points, std::size_t z,
                       std::size_t m) {
  if (points.empty()) throw ArgumentError("guess_alpha needs a history point");
  const double step = static_cast<double>(z) / static_cast<double>(m);
  bool any_neg = false, any_pos = false;
  double max_alpha = 0.0;
  double min_pos_alpha = std::numeric_limits<double>::infinity();
  for (const AlphaPoint& p : points) {
    (p.surplus < 0 ? any_neg : any_pos) = true;
    max_alpha = std::max(max_alpha, p.alpha);
    if (p.surplus >= 0) min_pos_alpha = std::min(min_pos_alpha, p.alpha);
  }
  if (points.size() >= 4 && any_neg && any_pos) {
    const ArctanFit fit = fit_arctan(points);
    double root = 0.0;
    if (fit.ok && fit.a * fit.b > 0 && fit.root(&root)) {
      return {ceil_to_grid(root, z, m), "arctan"};
    }
  }
  if (!any_pos) {
    const double next = max_alpha <= 0 ? step : 2.0 * max_alpha;
    return {ceil_to_grid(next, z, m), "double"};
  }
  if (!any_neg) {
    return {ceil_to_grid(min_pos_alpha - step, z, m), "lower"};
  }
  bool found = false;
  const double root =
      linear_root(std::vector<AlphaPoint>(points.begin(), points.end()), &found);
  if (found) return {ceil_to_grid(root, z, m), "linear"};
  // Surplus decreasing in alpha: move above every negative observation.
  return {ceil_to_grid(max_alpha + step, z, m), "double"};
}

}  // namespace spq

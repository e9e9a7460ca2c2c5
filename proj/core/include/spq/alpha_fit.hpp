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

#ifndef SPQ_ALPHA_FIT_HPP_
#define SPQ_ALPHA_FIT_HPP_

#include <cstddef>
#include <span>
#include <string>

namespace spq {

// One observation of the p-surplus r at summary level alpha.
struct AlphaPoint {
  double alpha = 0.0;
  double surplus = 0.0;
};

// r(alpha) ~ a * atan(b * alpha + c) + d.
struct ArctanFit {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double sse = 0.0;
  bool ok = false;
  double operator()(double alpha) const;
  // Root of the fitted curve when it crosses zero.
  bool root(double* alpha) const;
};

// Damped least squares (Levenberg-Marquardt) from several starting points.
ArctanFit fit_arctan(std::span<const AlphaPoint> points);

struct AlphaGuess {
  double alpha = 0.0;
  std::string method;  // arctan, linear, double, lower
};

// Smallest grid value q*Z/M (capped at 1) at or above the predicted root of
// r(alpha). Fewer than four points or a failed fit use the fallbacks: double
// alpha while every r < 0, step one level down while every r >= 0, and the
// piecewise-linear root otherwise.
AlphaGuess guess_alpha(std::span<const AlphaPoint> points, std::size_t z,
                       std::size_t m);

// Smallest grid value at or above alpha, clamped to [Z/M, 1].
double ceil_to_grid(double alpha, std::size_t z, std::size_t m);

}  // namespace spq

#endif  // SPQ_ALPHA_FIT_HPP_

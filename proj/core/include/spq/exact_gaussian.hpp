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

#ifndef SPQ_EXACT_GAUSSIAN_HPP_
#define SPQ_EXACT_GAUSSIAN_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "spq/milp.hpp"
#include "spq/model.hpp"
#include "spq/saa.hpp"
#include "spq/vg.hpp"

namespace spq {

double normal_cdf(double x);

// Inverse standard normal CDF. ArgumentError unless 0 < p < 1.
double normal_quantile(double p);

// One sparse entry of a per-attribute covariance table, 1-based tuple ids.
struct CovarianceEntry {
  TupleId i1 = 0;
  TupleId i2 = 0;
  std::string attr;
  double value = 0.0;
};
using Covariance = std::vector<CovarianceEntry>;

// CSV with header i1,i2,attr,value. ParseError on malformed rows.
Covariance parse_covariance_csv(const std::string& text);
Covariance read_covariance_csv(const std::string& path);

// Per-tuple mean and standard deviation of each Gaussian attribute.
struct GaussianColumns {
  MeanColumns mu;
  MeanColumns sigma;
};

// Reads normal and point-mass attributes of `rel`; other families are absent.
GaussianColumns gaussian_columns(const Relation& rel);

// One chance constraint in the form  P(sum a_i x_i >= v) >= p  with
// a_i ~ N(mu_i, .) and the covariance below. A <= row is stored negated.
struct GaussianRow {
  std::size_t index = 0;  // constraint index in the canonical query
  std::string label;
  double p = 0.5;
  double z_p = 0.0;
  double v = 0.0;
  bool negated = false;
  std::vector<double> mu;      // per tuple
  std::vector<double> sigma2;  // per tuple variance
  // Off-diagonal covariance terms, each unordered pair once (i1 < i2).
  std::vector<CovarianceEntry> cross;
  int c_var = -1;       // auxiliary variable in the linear part
  int linear_row = -1;  // mean row in the linear part

  bool correlated() const { return !cross.empty(); }
  // Quadratic form  sum sigma2 x^2 + 2 sum cross x_i1 x_i2.
  double quadratic_form(const Package& x) const;
  // Nonzero coefficients of the mean row plus the quadratic row.
  std::size_t coefficient_count() const;
  std::size_t quadratic_terms() const;
};

struct ExactTranslation {
  SaaFormulation linear;  // deterministic rows, expectations and mean rows
  std::vector<GaussianRow> rows;
  std::vector<std::string> warnings;

  std::size_t coefficient_count() const;
  // CPLEX LP text with the quadratic rows in a marked section of
  // "Subject To" using the  [ a x ^ 2 + b x * y - c ^ 2 ] <= 0  syntax.
  std::string to_lp() const;
};

// Rewrites every probabilistic constraint into a mean row and a quadratic
// row. Expectations of Gaussian attributes use mu; other stochastic
// attributes in expectation rows need a column in `other_means`.
ExactTranslation translate_exact(const QueryIR& q, const Relation& rel,
                                 const GaussianColumns& cols,
                                 const Covariance* covariance = nullptr,
                                 const MeanColumns& other_means = {},
                                 const FormulationOptions& opts = {});

// sum mu x >= v + z_p sqrt(quadratic form). NumericsError when the
// quadratic form is negative beyond rounding.
bool check_exact_feasible(const Package& x, const GaussianRow& row);

}  // namespace spq

#endif  // SPQ_EXACT_GAUSSIAN_HPP_

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

#ifndef SPQ_DECIMAL_HPP_
#define SPQ_DECIMAL_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace spq {

// An exact base-10 fraction num / 10^scale, used for probability levels so
// that ceil(p * n) is computed without floating-point drift
// (0.95 * 20 must be 19, not 18.999...).
class Decimal {
 public:
  Decimal() = default;

  // Accepts "0.95", ".5", "1", "9.5e-1". Throws ArgumentError otherwise or
  // when more than 18 fractional digits would be needed.
  static Decimal parse(std::string_view text);

  // Shortest decimal (at most 15 fractional digits) that round-trips to `v`.
  static Decimal from_double(double v);

  std::int64_t numerator() const { return num_; }
  int scale() const { return scale_; }
  std::int64_t denominator() const;

  double value() const;
  Decimal complement() const;  // 1 - this

  // ceil(this * n), exact.
  std::int64_t ceil_times(std::int64_t n) const;

  // Compares this * den against num exactly: returns sign(this - num/den).
  int compare_fraction(std::int64_t num, std::int64_t den) const;

  bool in_open_unit() const;  // 0 < p < 1

  std::string to_string() const;

  friend bool operator==(const Decimal& a, const Decimal& b);
  friend bool operator<(const Decimal& a, const Decimal& b);

 private:
  Decimal(std::int64_t num, int scale);
  void normalize();

  std::int64_t num_ = 0;
  int scale_ = 0;
};

}  // namespace spq

#endif  // SPQ_DECIMAL_HPP_

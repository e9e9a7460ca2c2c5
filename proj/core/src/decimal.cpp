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

#include "spq/decimal.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "spq/errors.hpp"

namespace spq {

namespace {

constexpr int kMaxScale = 18;

std::int64_t pow10(int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

__extension__ typedef __int128 i128;

}  // namespace

Decimal::Decimal(std::int64_t num, int scale) : num_(num), scale_(scale) {
  normalize();
}

void Decimal::normalize() {
  while (scale_ > 0 && num_ % 10 == 0) {
    num_ /= 10;
    --scale_;
  }
}

std::int64_t Decimal::denominator() const { return pow10(scale_); }

Decimal Decimal::parse(std::string_view text) {
  auto fail = [&]() -> Decimal {
    throw ArgumentError("not a decimal number: '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  i128 mantissa = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      any_digit = true;
      mantissa = mantissa * 10 + (c - '0');
      if (seen_dot) ++frac_digits;
      if (mantissa > static_cast<i128>(pow10(18)) * 1000) return fail();
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) return fail();
  int exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    bool exp_digit = false;
    for (; pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]));
         ++pos) {
      exp_digit = true;
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 40) return fail();
    }
    if (!exp_digit) return fail();
    if (exp_negative) exponent = -exponent;
  }
  if (pos != text.size()) return fail();
  int scale = frac_digits - exponent;
  while (scale < 0) {
    mantissa *= 10;
    ++scale;
  }
  while (scale > 0 && mantissa % 10 == 0) {
    mantissa /= 10;
    --scale;
  }
  if (scale > kMaxScale || mantissa > static_cast<i128>(pow10(18))) {
    return fail();
  }
  auto num = static_cast<std::int64_t>(mantissa);
  return Decimal(negative ? -num : num, scale);
}

Decimal Decimal::from_double(double v) {
  if (!std::isfinite(v) || std::fabs(v) > 1e6) {
    throw ArgumentError("probability value out of range");
  }
  for (int k = 0; k <= 15; ++k) {
    double scaled = std::round(v * static_cast<double>(pow10(k)));
    if (scaled / static_cast<double>(pow10(k)) == v) {
      return Decimal(static_cast<std::int64_t>(scaled), k);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15f", v);
  return parse(buf);
}

double Decimal::value() const {
  return static_cast<double>(num_) / static_cast<double>(denominator());
}

Decimal Decimal::complement() const {
  return Decimal(denominator() - num_, scale_);
}

std::int64_t Decimal::ceil_times(std::int64_t n) const {
  i128 prod = static_cast<i128>(num_) * n;
  i128 den = denominator();
  i128 q = prod / den;
  if (prod % den != 0 && prod > 0) ++q;
  return static_cast<std::int64_t>(q);
}

int Decimal::compare_fraction(std::int64_t num, std::int64_t den) const {
  i128 lhs = static_cast<i128>(num_) * den;
  i128 rhs = static_cast<i128>(num) * denominator();
  if (den < 0) std::swap(lhs, rhs);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

bool Decimal::in_open_unit() const { return num_ > 0 && num_ < denominator(); }

std::string Decimal::to_string() const {
  if (scale_ == 0) return std::to_string(num_);
  std::int64_t den = denominator();
  std::int64_t a = num_ < 0 ? -num_ : num_;
  std::string frac = std::to_string(a % den);
  frac.insert(0, static_cast<std::size_t>(scale_) - frac.size(), '0');
  return (num_ < 0 ? "-" : "") + std::to_string(a / den) + "." + frac;
}

bool operator==(const Decimal& a, const Decimal& b) {
  return a.num_ == b.num_ && a.scale_ == b.scale_;
}

bool operator<(const Decimal& a, const Decimal& b) {
  return a.compare_fraction(b.num_, b.denominator()) < 0;
}

}  // namespace spq

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

#include <fmt/format.h>

#include <cmath>
#include <string>

#include "spq/milp.hpp"

namespace spq {

namespace {

constexpr int kTermsPerLine = 8;

std::string num(double v) { return fmt::format("{}", v); }

void append_terms(std::string& out, const MilpProblem& p,
                  const SparseRow& coefs) {
  int written = 0;
  for (const auto& [j, a] : coefs) {
    if (a == 0.0) continue;
    if (written > 0 && written % kTermsPerLine == 0) out += "\n   ";
    const bool neg = a < 0;
    const double mag = neg ? -a : a;
    if (written == 0) {
      out += neg ? " -" : " ";
    } else {
      out += neg ? " - " : " + ";
    }
    if (mag != 1.0) out += num(mag) + " ";
    out += p.vars[j].name;
    ++written;
  }
  if (written == 0) out += " 0 " + (p.vars.empty() ? std::string() : p.vars[0].name);
}

const char* op(Cmp c) {
  switch (c) {
    case Cmp::kLe: return "<=";
    case Cmp::kGe: return ">=";
    case Cmp::kEq: return "=";
  }
  return "=";
}

bool is_binary(const MilpVar& v) {
  return v.integer && v.lo == 0.0 && v.hi == 1.0;
}

}  // namespace

std::string export_lp(const MilpProblem& in) {
  const MilpProblem p = in.indicators.empty() ? in : linearize(in);
  std::string out = "\\ Problem name: " + p.name + "\n";
  if (p.objective_constant != 0.0) {
    out += "\\ Objective constant: " + num(p.objective_constant) + "\n";
  }
  out += p.sense == Sense::kMaximize ? "Maximize\n" : "Minimize\n";
  if (p.vars.empty()) {
    out += " obj:\nEnd\n";
    return out;
  }
  SparseRow obj;
  for (std::size_t j = 0; j < p.vars.size(); ++j) {
    if (p.objective[j] != 0.0) obj.emplace_back(static_cast<int>(j), p.objective[j]);
  }
  out += " obj:";
  append_terms(out, p, obj);
  out += "\nSubject To\n";
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const LinearRow& r = p.rows[i];
    out += " " + (r.name.empty() ? "r" + std::to_string(i + 1) : r.name) + ":";
    append_terms(out, p, r.coefs);
    out += fmt::format(" {} {}\n", op(r.cmp), num(r.rhs));
  }
  out += "Bounds\n";
  for (const MilpVar& v : p.vars) {
    if (is_binary(v)) continue;
    const bool lo_inf = !std::isfinite(v.lo);
    const bool hi_inf = !std::isfinite(v.hi);
    if (lo_inf && hi_inf) {
      out += " " + v.name + " free\n";
    } else if (v.lo == v.hi) {
      out += " " + v.name + " = " + num(v.lo) + "\n";
    } else {
      out += " " + (lo_inf ? std::string("-inf") : num(v.lo)) + " <= " +
             v.name + " <= " + (hi_inf ? std::string("+inf") : num(v.hi)) +
             "\n";
    }
  }
  std::string general, binary;
  for (const MilpVar& v : p.vars) {
    if (!v.integer) continue;
    (is_binary(v) ? binary : general) += " " + v.name;
  }
  if (!general.empty()) out += "General\n" + general + "\n";
  if (!binary.empty()) out += "Binary\n" + binary + "\n";
  out += "End\n";
  return out;
}

}  // namespace spq

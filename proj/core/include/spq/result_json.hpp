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

#ifndef SPQ_RESULT_JSON_HPP_
#define SPQ_RESULT_JSON_HPP_

#include <cstdint>
#include <string>

#include "spq/model.hpp"
#include "spq/orchestrate.hpp"
#include "spq/validate.hpp"

namespace spq {

inline constexpr int kResultSchemaVersion = 1;
const char* library_version();

// {"tuples": [{"id": 3, "count": 2}, ...]} in id order.
std::string package_to_json(const Package& x);
// Accepts the object above, a bare list of such entries, or {"3": 2, ...}.
Package package_from_json(const std::string& text);

std::string report_to_json(const ValidationReport& r);

// Inputs recorded in the envelope. Everything here except timings feeds the
// configuration hash.
struct ResultMeta {
  std::string command;
  std::string algorithm;
  std::string query_text;
  std::string relation_csv;    // path as given
  std::string relation_specs;  // path as given
  RunConfig config;
  double wall_s = 0.0;
};

// Canonical JSON of the run configuration.
std::string config_json(const RunConfig& cfg);
// Hex FNV-1a of the configuration, query text and relation paths.
std::string config_hash(const ResultMeta& meta);

// Versioned envelope: metadata, seeds, package, validation report,
// certificate, bounds, trace and (optionally) timings.
std::string result_to_json(const RunResult& r, const ResultMeta& meta,
                           bool timings = true);

}  // namespace spq

#endif  // SPQ_RESULT_JSON_HPP_

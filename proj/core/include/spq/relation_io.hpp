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

#ifndef SPQ_RELATION_IO_HPP_
#define SPQ_RELATION_IO_HPP_

#include <string>

#include "spq/model.hpp"

namespace spq {

// Reads a numeric CSV with a header row. An optional "id" column must hold
// 1..N in order and is not kept as an attribute.
//
// The sidecar JSON declares stochastic attributes:
//   {"table": "R",
//    "attributes": {
//      "Gain": {"family": "gbm",
//               "params": {"s0": "price", "drift": 0.0005,
//                          "volatility": "vol", "horizon": "horizon"},
//               "group": "stock", "output": "gain"},
//      "Qty":  {"family": "discrete", "sources": ["q1", "q2", "q3"]}}}
// A parameter is a number (shared) or a column name (per tuple).
Relation parse_relation(const std::string& csv_text,
                        const std::string& specs_json,
                        const std::string& default_name);

Relation load_relation(const std::string& csv_path,
                       const std::string& specs_path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace spq

#endif  // SPQ_RELATION_IO_HPP_

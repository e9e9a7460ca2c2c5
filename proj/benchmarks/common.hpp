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


// Shared inputs: generated workload relations and their first query.

#ifndef SPQ_BENCHMARKS_COMMON_HPP_
#define SPQ_BENCHMARKS_COMMON_HPP_

#include <cstddef>
#include <string>

#include "spq/errors.hpp"
#include "spq/relation_io.hpp"
#include "spq/spaql.hpp"
#include "spq/workloads.hpp"

namespace spq::bench {

struct Input {
  Relation relation;
  QueryIR query;  // canonical
};

inline Input workload_input(WorkloadFamily family, std::size_t n,
                            const std::string& query = "Q1") {
  WorkloadSpec spec;
  spec.family = family;
  spec.n = n;
  Workload w = build_workload(spec, 1);
  for (const WorkloadQuery& q : w.queries) {
    if (q.name != query) continue;
    for (const WorkloadDataset& d : w.datasets) {
      if (d.name != q.dataset) continue;
      Relation rel = parse_relation(d.csv, d.specs, d.name);
      QueryIR ir = canonicalize(compile_query(q.text, rel), rel);
      return {std::move(rel), std::move(ir)};
    }
  }
  throw ArgumentError("no query " + query);
}

}  // namespace spq::bench

#endif  // SPQ_BENCHMARKS_COMMON_HPP_

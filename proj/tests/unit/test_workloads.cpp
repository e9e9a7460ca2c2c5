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


#include <chrono>
#include <filesystem>

#include "doctest.h"
#include <nlohmann/json.hpp>
#include "spq/errors.hpp"
#include "spq/orchestrate.hpp"
#include "spq/relation_io.hpp"
#include "spq/spaql.hpp"
#include "spq/workloads.hpp"

using namespace spq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("spq_test_" + name);
  fs::remove_all(p);
  return p;
}

const WorkloadQuery& find_query(const Workload& w, const std::string& name) {
  for (const auto& q : w.queries) {
    if (q.name == name) return q;
  }
  throw std::runtime_error("missing query " + name);
}

Relation dataset_relation(const Workload& w, const std::string& name) {
  for (const auto& d : w.datasets) {
    if (d.name == name) return parse_relation(d.csv, d.specs, d.name);
  }
  throw std::runtime_error("missing dataset " + name);
}

}  // namespace

TEST_CASE("workload generation is deterministic") {
  for (auto family :
       {WorkloadFamily::kGalaxy, WorkloadFamily::kPortfolio, WorkloadFamily::kTpch}) {
    WorkloadSpec spec;
    spec.family = family;
    spec.n = 20;
    Workload a = build_workload(spec, 3);
    Workload b = build_workload(spec, 3);
    CHECK(a.manifest_json() == b.manifest_json());
    REQUIRE(a.datasets.size() == b.datasets.size());
    for (std::size_t i = 0; i < a.datasets.size(); ++i) {
      CHECK(a.datasets[i].csv == b.datasets[i].csv);
      CHECK(a.datasets[i].specs == b.datasets[i].specs);
    }
    CHECK(build_workload(spec, 4).datasets[0].csv != a.datasets[0].csv);
    CHECK(a.queries.size() == 8);
  }
}

TEST_CASE("query parameters follow the family tables") {
  WorkloadSpec g;
  g.family = WorkloadFamily::kGalaxy;
  g.n = 30;
  Workload gal = build_workload(g, 1);
  const WorkloadQuery& q1 = find_query(gal, "Q1");
  CHECK(q1.p == 0.9);
  CHECK(q1.v == 40.0);
  Relation grel = dataset_relation(gal, q1.dataset);
  QueryIR gq = canonicalize(compile_query(q1.text, grel), grel);
  CHECK(gq.objective.sense == Sense::kMinimize);
  for (std::size_t k : gq.probabilistic_indices()) {
    CHECK(classify_interaction(gq.objective, gq.constraints[k]) ==
          Interaction::kCounteracted);
  }

  WorkloadSpec p;
  p.family = WorkloadFamily::kPortfolio;
  p.n = 30;
  Workload port = build_workload(p, 1);
  const WorkloadQuery& q2 = find_query(port, "Q2");
  CHECK(q2.p == 0.95);
  CHECK(q2.v == -10.0);
  Relation prel = dataset_relation(port, q2.dataset);
  QueryIR pq = canonicalize(compile_query(q2.text, prel), prel);
  CHECK(pq.objective.sense == Sense::kMaximize);
  for (std::size_t k : pq.probabilistic_indices()) {
    CHECK(classify_interaction(pq.objective, pq.constraints[k]) ==
          Interaction::kSupported);
  }

  WorkloadSpec scaled = g;
  scaled.v_scale = 2.0;
  CHECK(find_query(build_workload(scaled, 1), "Q1").v == 80.0);
}

TEST_CASE("workload spec validation") {
  WorkloadSpec s = workload_spec_from_json(R"({"family": "tpch", "n": 7})");
  CHECK(s.family == WorkloadFamily::kTpch);
  CHECK(s.n == 7);
  CHECK_THROWS_AS(workload_spec_from_json(R"({"bogus": 1})"), ArgumentError);
  WorkloadSpec bad;
  bad.n = 0;
  CHECK_THROWS_AS(bad.check(), ArgumentError);
  CHECK_THROWS_AS(workload_family_from_name("weather"), ArgumentError);
}

TEST_CASE("generated files load back") {
  WorkloadSpec spec;
  spec.family = WorkloadFamily::kTpch;
  spec.n = 8;
  fs::path dir = scratch("tpch");
  Workload w = generate_workload(spec, 2, dir.string());
  CHECK(fs::exists(dir / "manifest.json"));
  for (const auto& d : w.datasets) {
    Relation rel = load_relation((dir / d.csv_file).string(), (dir / d.specs_file).string());
    CHECK(rel.size() == d.n);
  }
  for (const auto& q : w.queries) CHECK(fs::exists(dir / q.file));
  fs::remove_all(dir);
}

TEST_CASE("smoke workload solves quickly") {
  WorkloadSpec spec;
  spec.n = 5;
  Workload w = build_workload(spec, 1);
  const WorkloadQuery& q = find_query(w, "Q1");
  Relation rel = dataset_relation(w, q.dataset);
  RunConfig cfg;
  cfg.m0 = 20;
  cfg.m_hat = 10000;
  cfg.fixed_m = true;
  auto start = std::chrono::steady_clock::now();
  QueryIR ir = compile_query(q.text, rel);
  RunContext ctx = prepare_run(ir, rel, cfg);
  RunResult r = naive(ctx, cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 1.0);
  CHECK(r.trace.size() == 1);
}

TEST_CASE("feasibility buckets") {
  CHECK(feasibility_bucket(0.0) == 0);
  CHECK(feasibility_bucket(0.24) == 0);
  CHECK(feasibility_bucket(0.25) == 25);
  CHECK(feasibility_bucket(0.74) == 50);
  CHECK(feasibility_bucket(0.99) == 75);
  CHECK(feasibility_bucket(1.0) == 100);
}

TEST_CASE("benchmark report") {
  WorkloadSpec spec;
  spec.n = 6;
  fs::path dir = scratch("bench");
  generate_workload(spec, 1, dir.string());
  // Add a query that no package can satisfy.
  auto manifest = nlohmann::json::parse(read_text_file((dir / "manifest.json").string()));
  auto extra = manifest["queries"][0];
  extra["name"] = "QX";
  extra["file"] = "QX.spaql";
  manifest["queries"].push_back(extra);
  write_text_file((dir / "manifest.json").string(), manifest.dump(2));
  write_text_file((dir / "QX.spaql").string(),
                  "SELECT PACKAGE(*) FROM short_all SUCH THAT COUNT(*) >= 2 AND "
                  "COUNT(*) <= 1 AND SUM(gain) >= -10 WITH PROBABILITY >= 0.9 "
                  "MAXIMIZE EXPECTED(SUM(gain))");

  BenchConfig cfg;
  cfg.seeds = {1, 2};
  cfg.m_grid = {5, 10};
  cfg.z_grid = {1, 5};
  cfg.queries = {"Q1", "Q2", "QX"};
  cfg.run.m_hat = 2000;
  cfg.run.epsilon = 10;
  cfg.run.time_limit_s = 10;
  BenchReport rep = run_benchmark(dir.string(), cfg);
  CHECK_FALSE(rep.rows.empty());
  for (const auto& row : rep.rows) {
    CAPTURE(row.query);
    CAPTURE(row.algorithm);
    if (row.query == "QX") {
      CHECK_FALSE(row.feasible);
      continue;
    }
    if (row.feasible && row.ratio) CHECK(*row.ratio >= 1.0 - 1e-12);
    if (row.algorithm == "naive") CHECK(row.z == 0);
  }
  for (const auto& [query, star] : rep.omega_star) {
    bool attained = false;
    for (const auto& row : rep.rows) {
      if (row.query == query && row.feasible && row.omega && *row.omega == star) {
        attained = true;
      }
    }
    CHECK(attained);
  }
  for (const auto& cell : rep.cells) {
    CHECK(cell.bucket == feasibility_bucket(cell.rate));
    CHECK(cell.runs == 2);
  }
  const std::string csv = rep.to_csv(false);
  CHECK(csv.rfind("query,dataset,algorithm,seed,m,z,status,feasible,certified,omega,"
                  "ratio,package_size,package\n", 0) == 0);
  CHECK(rep.to_csv(true).find(",wall_s\n") != std::string::npos);
  auto j = nlohmann::json::parse(rep.to_json(false));
  CHECK(j.contains("rows"));
  CHECK(j.contains("cells"));
  cfg.jobs = 3;
  CHECK(run_benchmark(dir.string(), cfg).to_json(false) == rep.to_json(false));
  fs::remove_all(dir);
}

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

// spq: command-line entry point. Exit codes: 0 success, 1 domain error,
// 2 usage error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spq/errors.hpp"
#include "spq/exact_gaussian.hpp"
#include "spq/log.hpp"
#include "spq/milp.hpp"
#include "spq/orchestrate.hpp"
#include "spq/relation_io.hpp"
#include "spq/result_json.hpp"
#include "spq/rng.hpp"
#include "spq/saa.hpp"
#include "spq/spaql.hpp"
#include "spq/summary.hpp"
#include "spq/validate.hpp"
#include "spq/vg.hpp"
#include "spq/workloads.hpp"

namespace {

struct Inputs {
  std::string relation;
  std::string specs;
  std::string query;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool need_query) {
  cmd->add_option("-r,--rel,--relation", in.relation, "Relation CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-s,--specs", in.specs, "Stochastic attribute specs JSON")
      ->check(CLI::ExistingFile);
  auto* q = cmd->add_option("-q,--query", in.query, "sPaQL query file")
                ->check(CLI::ExistingFile);
  if (need_query) q->required();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    spq::write_text_file(path, text);
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunOptions {
  spq::RunConfig cfg;
  std::string strategy = "in_memory";
  std::optional<std::uint64_t> validation_seed;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  spq::RunConfig& c = o.cfg;
  cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  cmd->add_option("--validation-seed", o.validation_seed,
                  "Validation stream seed (default derived from --seed)");
  cmd->add_option("--m0", c.m0, "Initial optimization scenarios")
      ->capture_default_str();
  cmd->add_option("--m-increment", c.m_increment, "Scenario increment")
      ->capture_default_str();
  cmd->add_option("--z0", c.z0, "Initial number of summaries")
      ->capture_default_str();
  cmd->add_option("--z-increment", c.z_increment, "Summary increment")
      ->capture_default_str();
  cmd->add_option("--m-hat,--mhat", c.m_hat, "Validation scenarios")
      ->capture_default_str();
  cmd->add_option("--m-cap", c.m_cap, "Largest M tried")->capture_default_str();
  cmd->add_option("--epsilon", c.epsilon, "Target approximation error")
      ->capture_default_str();
  cmd->add_option("--time-limit", c.time_limit_s,
                  "Per-solve time limit in seconds (0 = none)")
      ->capture_default_str();
  cmd->add_option("--node-limit", c.node_limit, "Per-solve node limit")
      ->capture_default_str();
  cmd->add_option("--strategy", o.strategy, "Summary strategy")
      ->check(CLI::IsMember({"in_memory", "tuple_wise", "scenario_wise"}))
      ->capture_default_str();
  cmd->add_flag("--fixed-m", c.fixed_m, "Single round at M = m0, Z = z0");
  cmd->add_option("--csa-iterations", c.csa_iteration_cap,
                  "CSA-Solve iteration cap")
      ->capture_default_str();
  cmd->add_option("--default-cap", c.default_cap,
                  "Bound for otherwise unbounded multiplicities")
      ->capture_default_str();
  cmd->add_option("-j,--jobs", c.jobs, "Worker threads")->capture_default_str();
}

spq::RunConfig finish(const RunOptions& o) {
  spq::RunConfig c = o.cfg;
  c.validation_seed = o.validation_seed;
  c.strategy = spq::strategy_from_name(o.strategy);
  return c;
}

spq::Relation load(const Inputs& in) {
  return spq::load_relation(in.relation, in.specs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spq: stochastic package queries"};
  app.require_subcommand(1);
  std::string log_level;
  app.add_option("--log-level", log_level,
                 "trace, debug, info, warn, error, off (default: $SPQ_LOG)");

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "Parse a query and print its AST");
  std::string parse_file;
  bool parse_pretty = false;
  Inputs parse_in;
  std::string parse_dump = "json";
  parse_cmd->add_option("-q,--query,query", parse_file, "sPaQL query file")
      ->required()
      ->check(CLI::ExistingFile);
  parse_cmd->add_option("--dump-ast", parse_dump, "AST output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  parse_cmd->add_flag("--pretty", parse_pretty,
                      "Print canonical query text (same as --dump-ast text)");
  parse_cmd->add_option("-r,--rel,--relation", parse_in.relation,
                        "Relation CSV; also lowers against it")
      ->check(CLI::ExistingFile);
  parse_cmd->add_option("-s,--specs", parse_in.specs, "Specs JSON")
      ->check(CLI::ExistingFile);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Generate scenarios");
  Inputs gen_in;
  std::size_t gen_m = 10;
  std::uint64_t gen_seed = 7;
  std::string gen_out, gen_attrs;
  add_inputs(gen_cmd, gen_in, false);
  gen_cmd->add_option("-m,--m,--scenarios", gen_m, "Number of scenarios")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed, "Scenario stream seed")
      ->capture_default_str();
  gen_cmd->add_option("--attrs", gen_attrs, "Comma-separated attributes");
  gen_cmd->add_option("-o,--out", gen_out,
                      "Binary scenario file (CSV to stdout when absent)");

  // summarize
  auto* sum_cmd = app.add_subcommand("summarize", "Build alpha-summaries");
  Inputs sum_in;
  std::size_t sum_m = 10, sum_z = 1;
  std::optional<double> sum_alpha;
  std::uint64_t sum_seed = 7;
  std::string sum_strategy = "in_memory", sum_package, sum_out;
  bool sum_json = false;
  add_inputs(sum_cmd, sum_in, true);
  sum_cmd->add_option("-m,--m,--scenarios", sum_m, "Scenarios")->capture_default_str();
  sum_cmd->add_option("-z,--z,--summaries", sum_z, "Summaries")->capture_default_str();
  sum_cmd->add_option("--alpha", sum_alpha, "Grid value q*Z/M (default Z/M)");
  sum_cmd->add_option("--seed", sum_seed, "Master seed")->capture_default_str();
  sum_cmd->add_option("--strategy", sum_strategy, "Summary strategy")
      ->check(CLI::IsMember({"in_memory", "tuple_wise", "scenario_wise"}))
      ->capture_default_str();
  sum_cmd->add_option("--package", sum_package, "Previous package JSON")
      ->check(CLI::ExistingFile);
  sum_cmd->add_option("-o,--out", sum_out, "Output file (stdout when absent)");
  sum_cmd->add_flag("--json", sum_json, "JSON instead of CSV");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve a stochastic package query");
  Inputs solve_in;
  RunOptions solve_opts;
  std::string solve_algo = "summarysearch", solve_solver = "builtin";
  std::string solve_out, solve_lp;
  bool solve_no_timings = false;
  add_inputs(solve_cmd, solve_in, true);
  add_run_options(solve_cmd, solve_opts);
  solve_cmd->add_option("--algo", solve_algo, "naive or summarysearch")
      ->check(CLI::IsMember({"naive", "summarysearch"}))
      ->capture_default_str();
  solve_cmd->add_option("--solver", solve_solver,
                        "builtin, or export to write the first MILP as LP")
      ->check(CLI::IsMember({"builtin", "export"}))
      ->capture_default_str();
  solve_cmd->add_option("--lp-out", solve_lp, "LP file for --solver export");
  solve_cmd->add_option("-o,--out", solve_out, "Result JSON");
  solve_cmd->add_flag("--no-timings", solve_no_timings,
                      "Omit wall-clock timings from the result");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "Validate a package out of sample");
  Inputs val_in;
  std::string val_package, val_out;
  std::size_t val_m_hat = 100000, val_jobs = 1;
  std::uint64_t val_seed = 7;
  add_inputs(val_cmd, val_in, true);
  val_cmd->add_option("-p,--package", val_package, "Package JSON")
      ->required()
      ->check(CLI::ExistingFile);
  val_cmd->add_option("--m-hat,--mhat", val_m_hat, "Validation scenarios")
      ->capture_default_str();
  val_cmd->add_option("--seed", val_seed,
                      "Master seed; the validation stream is derived from it")
      ->capture_default_str();
  val_cmd->add_option("-j,--jobs", val_jobs, "Worker threads")->capture_default_str();
  val_cmd->add_option("-o,--out", val_out, "Report JSON");

  // translate-exact
  auto* ex_cmd = app.add_subcommand(
      "translate-exact", "Exact Gaussian reformulation as annotated LP text");
  Inputs ex_in;
  std::string ex_cov, ex_out, ex_check;
  add_inputs(ex_cmd, ex_in, true);
  ex_cmd->add_option("--covariance", ex_cov, "Sparse covariance CSV (i1,i2,attr,value)")
      ->check(CLI::ExistingFile);
  ex_cmd->add_option("-o,--out", ex_out, "LP output");
  ex_cmd->add_option("--check", ex_check,
                     "Package JSON to test against every chance constraint")
      ->check(CLI::ExistingFile);

  // workload
  auto* wl_cmd = app.add_subcommand("workload", "Synthetic workloads");
  wl_cmd->require_subcommand(1);
  auto* wl_gen = wl_cmd->add_subcommand("generate", "Write a workload directory");
  std::string wl_family = "portfolio", wl_dir, wl_config;
  std::size_t wl_n = 200;
  std::uint64_t wl_seed = 1;
  wl_gen->add_option("--family", wl_family, "galaxy, portfolio or tpch")
      ->check(CLI::IsMember({"galaxy", "portfolio", "tpch"}))
      ->capture_default_str();
  auto* wl_n_opt = wl_gen->add_option("-n,--tuples", wl_n, "Tuples per dataset")
                       ->capture_default_str();
  wl_gen->add_option("--seed", wl_seed, "Generator seed")->capture_default_str();
  wl_gen->add_option("--config", wl_config, "JSON parameter overrides")
      ->check(CLI::ExistingFile);
  wl_gen->add_option("-o,--out", wl_dir, "Output directory")->required();

  auto* wl_bench = wl_cmd->add_subcommand("bench", "Benchmark a workload");
  std::string wb_dir, wb_algos = "naive,summarysearch", wb_seeds = "1,2,3",
                      wb_m = "10,20,40", wb_z = "1", wb_queries, wb_csv, wb_json;
  std::size_t wb_m_hat = 10000, wb_jobs = 1;
  double wb_time = 60.0, wb_eps = 0.2;
  std::uint64_t wb_vseed = 1;
  bool wb_no_timings = false;
  wl_bench->add_option("-d,--dir", wb_dir, "Workload directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  wl_bench->add_option("--algos", wb_algos, "Algorithms")->capture_default_str();
  wl_bench->add_option("--seeds", wb_seeds, "Seeds")->capture_default_str();
  wl_bench->add_option("--m-grid", wb_m, "Scenario counts")->capture_default_str();
  wl_bench->add_option("--z-grid", wb_z, "Summary counts")->capture_default_str();
  wl_bench->add_option("--queries", wb_queries, "Query names (default all)");
  wl_bench->add_option("--m-hat,--mhat", wb_m_hat, "Validation scenarios")
      ->capture_default_str();
  wl_bench->add_option("--validation-seed", wb_vseed, "Validation seed")
      ->capture_default_str();
  wl_bench->add_option("--epsilon", wb_eps, "Target approximation error")
      ->capture_default_str();
  wl_bench->add_option("--time-limit", wb_time, "Per-solve time limit (s)")
      ->capture_default_str();
  wl_bench->add_option("-j,--jobs", wb_jobs, "Parallel (query, seed) cells")
      ->capture_default_str();
  wl_bench->add_option("--csv", wb_csv, "CSV report path");
  wl_bench->add_option("--json", wb_json, "JSON report path");
  wl_bench->add_flag("--no-timings", wb_no_timings, "Omit timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    spq::init_logging(log_level);

    if (*parse_cmd) {
      const std::string text = spq::read_text_file(parse_file);
      const spq::Ast ast = spq::parse(text);
      if (parse_pretty || parse_dump == "text") {
        std::cout << spq::pretty_print(ast) << "\n";
      } else {
        std::cout << spq::ast_to_json(ast) << "\n";
      }
      if (!parse_in.relation.empty()) {
        const spq::Relation rel = load(parse_in);
        const spq::QueryIR ir = spq::compile_query(text, rel);
        std::cerr << fmt::format("lowered: {} constraints, {} probabilistic\n",
                                 ir.constraints.size(), ir.probabilistic_count());
      }
      return 0;
    }

    if (*gen_cmd) {
      const spq::Relation rel = load(gen_in);
      spq::GenerateOptions go;
      go.attrs = split(gen_attrs);
      const spq::ScenarioSet set = spq::generate_scenarios(rel, gen_m, gen_seed, go);
      if (!gen_out.empty()) {
        spq::write_scenarios(gen_out, set);
        return 0;
      }
      std::string out = "attr,scenario,id,value\n";
      for (std::size_t a = 0; a < set.attrs.size(); ++a) {
        for (std::size_t j = 0; j < set.m; ++j) {
          const auto col = set.column(a, j);
          for (std::size_t i = 0; i < set.n; ++i) {
            out += fmt::format("{},{},{},{}\n", set.attrs[a], j + 1, i + 1, col[i]);
          }
        }
      }
      emit(out, "");
      return 0;
    }

    if (*sum_cmd) {
      const spq::Relation rel = load(sum_in);
      const spq::QueryIR q =
          spq::compile_query(spq::read_text_file(sum_in.query), rel);
      spq::RunConfig rc;
      rc.seed = sum_seed;
      const std::uint64_t opt = spq::optimization_seed(rc);
      const spq::ScenarioSet set = spq::generate_scenarios(rel, sum_m, opt);
      const spq::MeanColumns means;
      spq::CsaInput in;
      in.query = &q;
      in.relation = &rel;
      in.means = &means;
      in.m = sum_m;
      in.z = sum_z;
      in.scenario_seed = opt;
      in.partition_seed = spq::derive_seed(opt, "partition",
                                           sum_m * 1000003 + sum_z);
      in.scenarios = &set;
      in.strategy = spq::strategy_from_name(sum_strategy);
      const double alpha = sum_alpha ? *sum_alpha
                                     : spq::alpha_from_level(1, sum_z, sum_m);
      spq::alpha_level(alpha, sum_z, sum_m);
      const spq::Package prev =
          sum_package.empty()
              ? spq::Package{}
              : spq::package_from_json(spq::read_text_file(sum_package));
      std::string csv = "constraint,label,partition,alpha,id,value\n";
      std::string js = "{\n  \"m\": " + std::to_string(sum_m) +
                       ",\n  \"z\": " + std::to_string(sum_z) +
                       ",\n  \"alpha\": " + fmt::format("{}", alpha) +
                       ",\n  \"constraints\": [";
      bool first_k = true;
      for (std::size_t k : q.probabilistic_indices()) {
        if (q.constraints[k].epigraph) continue;
        const std::string& label = q.constraints[k].label;
        const auto sums = spq::build_summaries(in, k, alpha, prev, {});
        js += first_k ? "\n" : ",\n";
        first_k = false;
        js += fmt::format("    {{\"index\": {}, \"label\": \"{}\", \"summaries\": [",
                          k, label);
        for (std::size_t s = 0; s < sums.size(); ++s) {
          js += s == 0 ? "\n" : ",\n";
          std::vector<std::size_t> g1;
          for (std::size_t j : sums[s].scenarios) g1.push_back(j + 1);
          js += fmt::format(
              "      {{\"partition\": {}, \"scenarios\": [{}], \"values\": [{}]}}",
              sums[s].partition + 1, fmt::join(g1, ", "),
              fmt::join(sums[s].values, ", "));
          for (std::size_t i = 0; i < sums[s].values.size(); ++i) {
            csv += fmt::format("{},{},{},{},{},{}\n", k, label,
                               sums[s].partition + 1, alpha, i + 1,
                               sums[s].values[i]);
          }
        }
        js += "\n    ]}";
      }
      js += "\n  ]\n}\n";
      const std::string out = sum_json ? js : csv;
      emit(out, sum_out);
      return 0;
    }

    if (*solve_cmd) {
      const spq::Relation rel = load(solve_in);
      const std::string text = spq::read_text_file(solve_in.query);
      const spq::QueryIR q = spq::compile_query(text, rel);
      const spq::RunConfig cfg = finish(solve_opts);
      if (solve_solver == "export") {
        if (solve_lp.empty()) {
          std::cerr << "error: --solver export needs --lp-out\n";
          return 2;
        }
        spq::RunContext ctx = spq::prepare_run(q, rel, cfg);
        const std::uint64_t opt = spq::optimization_seed(cfg);
        const spq::ScenarioSet set = spq::generate_scenarios(rel, cfg.m0, opt);
        spq::FormulationOptions fo;
        fo.default_cap = cfg.default_cap;
        spq::MilpProblem p;
        if (solve_algo == "naive") {
          p = spq::formulate_saa(ctx.query, rel, set, opt, ctx.means, fo).problem;
        } else {
          spq::CsaInput in;
          in.query = &ctx.query;
          in.relation = &rel;
          in.means = &ctx.means;
          in.m = cfg.m0;
          in.z = cfg.z0;
          in.scenario_seed = opt;
          in.partition_seed =
              spq::derive_seed(opt, "partition", cfg.m0 * 1000003 + cfg.z0);
          in.scenarios = &set;
          in.strategy = cfg.strategy;
          in.formulation = fo;
          std::vector<double> alpha(ctx.query.constraints.size(), 0.0);
          for (std::size_t k : ctx.query.probabilistic_indices()) {
            if (!ctx.query.constraints[k].epigraph) {
              alpha[k] = spq::alpha_from_level(1, cfg.z0, cfg.m0);
            }
          }
          p = spq::formulate_csa(in, alpha, spq::Package{}).saa.problem;
        }
        spq::write_text_file(solve_lp, spq::export_lp(p));
        std::cerr << fmt::format("wrote {} ({} variables, {} rows)\n", solve_lp,
                                 p.vars.size(), p.rows.size() + p.indicators.size());
        return 0;
      }
      const auto t0 = std::chrono::steady_clock::now();
      spq::RunContext ctx = spq::prepare_run(q, rel, cfg);
      const spq::RunResult r = solve_algo == "naive"
                                   ? spq::naive(ctx, cfg)
                                   : spq::summary_search(ctx, cfg);
      spq::ResultMeta meta;
      meta.command = "solve";
      meta.algorithm = solve_algo;
      meta.query_text = text;
      meta.relation_csv = solve_in.relation;
      meta.relation_specs = solve_in.specs;
      meta.config = cfg;
      meta.wall_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      emit(spq::result_to_json(r, meta, !solve_no_timings), solve_out);
      if (!r.success) {
        std::cerr << "no feasible package found";
        if (!r.failure.empty()) std::cerr << ": " << r.failure;
        std::cerr << "\n";
      }
      return 0;
    }

    if (*val_cmd) {
      const spq::Relation rel = load(val_in);
      const spq::QueryIR q =
          spq::compile_query(spq::read_text_file(val_in.query), rel);
      spq::RunConfig cfg;
      cfg.seed = val_seed;
      cfg.m_hat = val_m_hat;
      cfg.jobs = val_jobs;
      const spq::RunContext ctx = spq::prepare_run(q, rel, cfg);
      const spq::Package x =
          spq::package_from_json(spq::read_text_file(val_package));
      const spq::ValidationReport rep =
          spq::validate(x, ctx.query, rel, ctx.means, val_m_hat,
                        ctx.validation_seed, val_jobs);
      emit(spq::report_to_json(rep), val_out);
      return 0;
    }

    if (*ex_cmd) {
      const spq::Relation rel = load(ex_in);
      const spq::QueryIR q =
          spq::compile_query(spq::read_text_file(ex_in.query), rel);
      const spq::GaussianColumns cols = spq::gaussian_columns(rel);
      std::optional<spq::Covariance> cov;
      if (!ex_cov.empty()) cov = spq::read_covariance_csv(ex_cov);
      // Non-Gaussian attributes in expectation rows use sample means.
      spq::MeanColumns other;
      std::vector<std::string> need;
      for (const std::string& a : rel.stochastic_names()) {
        if (!cols.mu.count(a)) need.push_back(a);
      }
      if (!need.empty()) {
        spq::RunConfig rc;
        other = spq::mean_columns(rel, 10000, spq::validation_seed(rc), 1, need);
      }
      const spq::ExactTranslation t =
          spq::translate_exact(q, rel, cols, cov ? &*cov : nullptr, other);
      emit(t.to_lp(), ex_out);
      if (!ex_check.empty()) {
        const spq::Package x =
            spq::package_from_json(spq::read_text_file(ex_check));
        for (const spq::GaussianRow& row : t.rows) {
          std::cerr << fmt::format("{}: {}\n", row.label,
                                   spq::check_exact_feasible(x, row)
                                       ? "feasible"
                                       : "infeasible");
        }
      }
      return 0;
    }

    if (*wl_gen) {
      spq::WorkloadSpec spec;
      spec.family = spq::workload_family_from_name(wl_family);
      spec.n = wl_n;
      if (!wl_config.empty()) {
        spec = spq::workload_spec_from_json(spq::read_text_file(wl_config), spec);
        if (wl_n_opt->count() > 0) spec.n = wl_n;
      }
      const spq::Workload w = spq::generate_workload(spec, wl_seed, wl_dir);
      std::cerr << fmt::format("wrote {} datasets and {} queries to {}\n",
                               w.datasets.size(), w.queries.size(), wl_dir);
      return 0;
    }

    if (*wl_bench) {
      spq::BenchConfig bc;
      bc.algorithms = split(wb_algos);
      bc.seeds.clear();
      for (const auto& s : split(wb_seeds)) bc.seeds.push_back(std::stoull(s));
      bc.m_grid.clear();
      for (const auto& s : split(wb_m)) bc.m_grid.push_back(std::stoull(s));
      bc.z_grid.clear();
      for (const auto& s : split(wb_z)) bc.z_grid.push_back(std::stoull(s));
      bc.queries = split(wb_queries);
      bc.validation_seed = wb_vseed;
      bc.run.m_hat = wb_m_hat;
      bc.run.epsilon = wb_eps;
      bc.run.time_limit_s = wb_time;
      bc.jobs = wb_jobs;
      const spq::BenchReport rep = spq::run_benchmark(wb_dir, bc);
      if (!wb_csv.empty()) spq::write_text_file(wb_csv, rep.to_csv(!wb_no_timings));
      if (!wb_json.empty()) {
        spq::write_text_file(wb_json, rep.to_json(!wb_no_timings));
      }
      if (wb_csv.empty() && wb_json.empty()) emit(rep.to_csv(!wb_no_timings), "");
      return 0;
    }
  } catch (const spq::Error& e) {
    std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: bad number: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: number out of range: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

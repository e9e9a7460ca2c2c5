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

#ifndef SPQ_WORKLOADS_HPP_
#define SPQ_WORKLOADS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spq/model.hpp"
#include "spq/orchestrate.hpp"

namespace spq {

enum class WorkloadFamily { kGalaxy, kPortfolio, kTpch };
const char* workload_family_name(WorkloadFamily f);
WorkloadFamily workload_family_from_name(const std::string& name);

// Noisy sensor readings: one base flux column with Gaussian or Pareto noise.
struct GalaxyParams {
  double base_lo = 4.0;  // base flux drawn uniformly in [base_lo, base_hi]
  double base_hi = 12.0;
  double sigma = 2.0;        // shared normal deviation
  double sigma_star = 3.0;   // per-tuple deviations are |N(0, sigma_star)|
  double pareto_scale = 1.0;
  double pareto_scale_star = 1.0;       // per-tuple scales |N(0, .)|
  double pareto_scale_star_wide = 3.0;  // second per-tuple variant
  double pareto_shape = 1.0;
  double min_spread = 1e-3;  // floor for generated deviations and scales
};

// Stock trades: buy one share now, sell after `sell_after` days. Prices
// follow a geometric Brownian motion shared by all trades of one stock.
struct PortfolioParams {
  double price_lo = 5.0;
  double price_hi = 200.0;
  double drift_mean = 0.0005;  // daily drift ~ N(drift_mean, drift_sd)
  double drift_sd = 0.001;
  double vol_lo = 0.005;  // daily volatility ~ U(vol_lo, vol_hi)
  double vol_hi = 0.03;
  double budget = 1000.0;
  std::int64_t short_days = 2;
  std::int64_t long_days = 7;
  double volatile_fraction = 0.3;
};

// Data integration: D source values per attribute, centred on a base value.
struct TpchParams {
  std::vector<std::int64_t> sources = {3, 10};
  double quantity_lo = 0.5;
  double quantity_hi = 3.0;
  double revenue_lo = 50.0;
  double revenue_hi = 500.0;
  double revenue_noise = 0.2;  // relative spread of revenue sources
  double revenue_threshold = 1000.0;
  double poisson_rate_few = 2.0;   // used with the smallest D
  double poisson_rate_many = 1.0;  // used with every other D
  double student_df = 2.0;
};

struct WorkloadSpec {
  WorkloadFamily family = WorkloadFamily::kPortfolio;
  std::size_t n = 200;
  double v_scale = 1.0;  // multiplies every query threshold v
  GalaxyParams galaxy;
  PortfolioParams portfolio;
  TpchParams tpch;

  void check() const;  // ArgumentError on out-of-range parameters
};

// Overrides from a JSON object such as {"family": "galaxy", "n": 100,
// "galaxy": {"sigma": 2}}; unknown keys raise ArgumentError.
WorkloadSpec workload_spec_from_json(const std::string& text,
                                     WorkloadSpec base = {});

struct WorkloadQuery {
  std::string name;
  std::string dataset;
  std::string file;
  std::string text;
  double p = 0.9;
  double v = 0.0;
  std::string supportiveness;
  std::string features;
};

struct WorkloadDataset {
  std::string name;
  std::string csv_file;
  std::string specs_file;
  std::size_t n = 0;
  std::string csv;
  std::string specs;
};

struct Workload {
  WorkloadSpec spec;
  std::uint64_t seed = 0;
  std::vector<WorkloadDataset> datasets;
  std::vector<WorkloadQuery> queries;

  std::string manifest_json() const;
};

// Pure generation; nothing touches the disk.
Workload build_workload(const WorkloadSpec& spec, std::uint64_t seed);

// Writes every dataset (CSV + specs JSON), one .spaql file per query and
// manifest.json into `dir`, creating it if needed.
Workload generate_workload(const WorkloadSpec& spec, std::uint64_t seed,
                           const std::string& dir);


struct BenchConfig {
  std::vector<std::string> algorithms = {"naive", "summarysearch"};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::vector<std::size_t> m_grid = {10, 20, 40};
  std::vector<std::size_t> z_grid = {1};
  std::vector<std::string> queries;  // empty: all
  std::uint64_t validation_seed = 1;  // shared by every run of a query
  RunConfig run;  // m_hat, epsilon, time limit, caps
  std::size_t jobs = 1;  // parallel (query, seed) cells
};

struct BenchRow {
  std::string query;
  std::string dataset;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  std::size_t z = 0;  // 0 for naive
  std::string status;  // feasible, infeasible, time_limit, error
  bool feasible = false;
  bool certified = false;
  std::optional<double> omega;
  std::optional<double> ratio;  // 1 + epsilon-hat against the best row
  std::int64_t package_size = 0;
  std::string package;
  double wall_s = 0.0;
  std::string message;
};

struct BenchCell {
  std::string query;
  std::string algorithm;
  std::size_t m = 0;
  std::size_t z = 0;
  std::size_t runs = 0;
  std::size_t feasible = 0;
  double rate = 0.0;
  int bucket = 0;  // largest of 0, 25, 50, 75, 100 not above the rate
  double mean_wall_s = 0.0;
  std::optional<double> mean_ratio;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchCell> cells;
  std::vector<std::pair<std::string, double>> omega_star;  // per query

  // Columns: query,dataset,algorithm,seed,m,z,status,feasible,certified,
  // omega,ratio,package_size,package[,wall_s]
  std::string to_csv(bool timings = true) const;
  std::string to_json(bool timings = true) const;
};

int feasibility_bucket(double rate);

BenchReport run_benchmark(const std::string& workload_dir,
                          const BenchConfig& cfg);

}  // namespace spq

#endif  // SPQ_WORKLOADS_HPP_

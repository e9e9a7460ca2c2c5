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

#include "spq/workloads.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <utility>

#include "spq/bounds.hpp"
#include "spq/errors.hpp"
#include "spq/parallel.hpp"
#include "spq/relation_io.hpp"
#include "spq/rng.hpp"
#include "spq/spaql.hpp"

namespace spq {

using nlohmann::json;

namespace {

// Columns of one generated table, written in insertion order.
class Table {
 public:
  explicit Table(std::size_t n) : n_(n) {}
  void add(const std::string& name, std::vector<double> col) {
    names_.push_back(name);
    cols_.push_back(std::move(col));
  }
  std::string csv() const {
    std::string out = "id";
    for (const auto& nm : names_) out += "," + nm;
    out += "\n";
    for (std::size_t i = 0; i < n_; ++i) {
      out += std::to_string(i + 1);
      for (const auto& c : cols_) out += "," + fmt::format("{}", c[i]);
      out += "\n";
    }
    return out;
  }

 private:
  std::size_t n_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> cols_;
};

double uniform_in(KeyedStream& s, double lo, double hi) {
  return lo + (hi - lo) * s.uniform();
}

double round_to(double v, double unit) { return std::round(v / unit) * unit; }

std::string num(double v) { return fmt::format("{}", v); }

std::string prob_text(double p) { return fmt::format("{}", p); }

WorkloadDataset make_dataset(const std::string& name, std::size_t n,
                             const Table& t, const json& specs) {
  WorkloadDataset d;
  d.name = name;
  d.csv_file = name + ".csv";
  d.specs_file = name + ".json";
  d.n = n;
  d.csv = t.csv();
  d.specs = specs.dump(2) + "\n";
  return d;
}

void galaxy(const WorkloadSpec& spec, std::uint64_t seed, Workload& w) {
  const GalaxyParams& g = spec.galaxy;
  const std::size_t n = spec.n;
  KeyedStream s(derive_seed(seed, "galaxy"), 0, 0);
  std::vector<double> base(n), sd_star(n), sc_star(n), sc_wide(n);
  for (std::size_t i = 0; i < n; ++i) {
    base[i] = round_to(uniform_in(s, g.base_lo, g.base_hi), 1e-4);
    sd_star[i] = std::max(g.min_spread, std::fabs(g.sigma_star * s.normal()));
    sc_star[i] =
        std::max(g.min_spread, std::fabs(g.pareto_scale_star * s.normal()));
    sc_wide[i] =
        std::max(g.min_spread, std::fabs(g.pareto_scale_star_wide * s.normal()));
  }
  Table t(n);
  t.add("petromag_r", base);
  t.add("sd_star", sd_star);
  t.add("scale_star", sc_star);
  t.add("scale_star_wide", sc_wide);
  json a = json::object();
  a["r_normal"] = {{"family", "normal"},
                   {"params", {{"mean", "petromag_r"}, {"stddev", g.sigma}}}};
  a["r_normal_star"] = {
      {"family", "normal"},
      {"params", {{"mean", "petromag_r"}, {"stddev", "sd_star"}}}};
  a["r_pareto"] = {{"family", "pareto"},
                   {"params",
                    {{"scale", g.pareto_scale},
                     {"shape", g.pareto_shape},
                     {"loc", "petromag_r"}}}};
  a["r_pareto_star"] = {{"family", "pareto"},
                        {"params",
                         {{"scale", "scale_star"},
                          {"shape", g.pareto_shape},
                          {"loc", "petromag_r"}}}};
  a["r_pareto_star_wide"] = {{"family", "pareto"},
                             {"params",
                              {{"scale", "scale_star_wide"},
                               {"shape", g.pareto_shape},
                               {"loc", "petromag_r"}}}};
  json specs = {{"table", "galaxy"}, {"attributes", a}};
  w.datasets.push_back(make_dataset("galaxy", n, t, specs));

  struct Row {
    const char* attr;
    const char* op;
    double v;
    const char* support;
    const char* features;
  };
  const Row rows[] = {
      {"r_normal", ">=", 40, "counteracted", "normal, shared sigma"},
      {"r_normal_star", ">=", 43, "counteracted", "normal, per-tuple sigma"},
      {"r_normal", "<=", 50, "supported", "normal, shared sigma"},
      {"r_normal_star", "<=", 52, "supported", "normal, per-tuple sigma"},
      {"r_pareto", ">=", 65, "counteracted", "pareto, shared scale"},
      {"r_pareto_star", ">=", 65, "counteracted", "pareto, per-tuple scale"},
      {"r_pareto", "<=", 109, "supported", "pareto, shared scale"},
      {"r_pareto_star_wide", "<=", 90, "supported",
       "pareto, wide per-tuple scale"},
  };
  int k = 0;
  for (const Row& r : rows) {
    WorkloadQuery q;
    q.name = fmt::format("Q{}", ++k);
    q.dataset = "galaxy";
    q.file = q.name + ".spaql";
    q.p = 0.9;
    q.v = r.v * spec.v_scale;
    q.supportiveness = r.support;
    q.features = r.features;
    q.text = fmt::format(
        "SELECT PACKAGE(*) FROM galaxy SUCH THAT\n"
        "  COUNT(*) BETWEEN 5 AND 10 AND\n"
        "  SUM({0}) {1} {2} WITH PROBABILITY >= {3}\n"
        "MINIMIZE EXPECTED(SUM({0}))\n",
        r.attr, r.op, num(q.v), prob_text(q.p));
    w.queries.push_back(std::move(q));
  }
}

void portfolio(const WorkloadSpec& spec, std::uint64_t seed, Workload& w) {
  const PortfolioParams& pp = spec.portfolio;
  const std::size_t n = spec.n;
  const std::size_t stocks =
      (n + static_cast<std::size_t>(pp.short_days) - 1) /
      static_cast<std::size_t>(pp.short_days);
  KeyedStream s(derive_seed(seed, "portfolio"), 0, 0);
  std::vector<double> price(stocks), drift(stocks), vol(stocks);
  for (std::size_t k = 0; k < stocks; ++k) {
    price[k] = round_to(uniform_in(s, pp.price_lo, pp.price_hi), 0.01);
    drift[k] = pp.drift_mean + pp.drift_sd * s.normal();
    vol[k] = uniform_in(s, pp.vol_lo, pp.vol_hi);
  }
  std::vector<std::size_t> by_vol(stocks);
  for (std::size_t k = 0; k < stocks; ++k) by_vol[k] = k;
  std::stable_sort(by_vol.begin(), by_vol.end(),
                   [&](std::size_t a, std::size_t b) { return vol[a] > vol[b]; });
  const std::size_t n_volatile = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(pp.volatile_fraction * static_cast<double>(stocks) - 1e-9)));
  std::vector<std::size_t> volatile_set(by_vol.begin(),
                                        by_vol.begin() + n_volatile);
  std::sort(volatile_set.begin(), volatile_set.end());
  std::vector<std::size_t> all(stocks);
  for (std::size_t k = 0; k < stocks; ++k) all[k] = k;

  auto emit = [&](const std::string& name, const std::vector<std::size_t>& ids,
                  std::int64_t days, std::size_t limit) {
    std::vector<double> stock, pr, dr, vl, sell;
    for (std::size_t k : ids) {
      for (std::int64_t d = 1; d <= days; ++d) {
        if (stock.size() == limit) break;
        stock.push_back(static_cast<double>(k + 1));
        pr.push_back(price[k]);
        dr.push_back(drift[k]);
        vl.push_back(vol[k]);
        sell.push_back(static_cast<double>(d));
      }
    }
    const std::size_t m = stock.size();
    Table t(m);
    t.add("stock", stock);
    t.add("price", pr);
    t.add("drift", dr);
    t.add("vol", vl);
    t.add("sell_after", sell);
    json a = json::object();
    a["gain"] = {{"family", "gbm"},
                 {"params",
                  {{"s0", "price"},
                   {"drift", "drift"},
                   {"volatility", "vol"},
                   {"horizon", "sell_after"}}},
                 {"group", "stock"},
                 {"output", "gain"}};
    json specs = {{"table", name}, {"attributes", a}};
    w.datasets.push_back(make_dataset(name, m, t, specs));
  };
  const std::size_t unlimited = static_cast<std::size_t>(-1);
  emit("short_all", all, pp.short_days, n);
  emit("short_volatile", volatile_set, pp.short_days, unlimited);
  emit("long_volatile", volatile_set, pp.long_days, unlimited);

  struct Row {
    const char* dataset;
    double p;
    double v;
    const char* features;
  };
  const Row rows[] = {
      {"short_all", 0.9, -10, "short horizon, all stocks"},
      {"short_all", 0.95, -10, "short horizon, all stocks"},
      {"short_volatile", 0.9, -10, "short horizon, most volatile"},
      {"short_volatile", 0.95, -10, "short horizon, most volatile"},
      {"short_volatile", 0.9, -1, "short horizon, most volatile"},
      {"short_volatile", 0.95, -1, "short horizon, most volatile"},
      {"long_volatile", 0.9, -10, "long horizon, most volatile"},
      {"long_volatile", 0.9, -1, "long horizon, most volatile"},
  };
  int k = 0;
  for (const Row& r : rows) {
    WorkloadQuery q;
    q.name = fmt::format("Q{}", ++k);
    q.dataset = r.dataset;
    q.file = q.name + ".spaql";
    q.p = r.p;
    q.v = r.v * spec.v_scale;
    q.supportiveness = "supported";
    q.features = r.features;
    q.text = fmt::format(
        "SELECT PACKAGE(*) FROM {0} SUCH THAT\n"
        "  SUM(price) <= {1} AND\n"
        "  SUM(gain) >= {2} WITH PROBABILITY >= {3}\n"
        "MAXIMIZE EXPECTED(SUM(gain))\n",
        r.dataset, num(pp.budget), num(q.v), prob_text(q.p));
    w.queries.push_back(std::move(q));
  }
}

// D draws of a noise family, shifted so their mean is exactly `base`.
std::vector<double> anchored(KeyedStream& s, double base, std::int64_t d,
                             const std::string& family, double param,
                             double spread) {
  std::vector<double> e(static_cast<std::size_t>(d));
  for (double& x : e) {
    if (family == "exponential") {
      x = s.exponential() / param;
    } else if (family == "poisson") {
      x = static_cast<double>(s.poisson(param));
    } else if (family == "uniform") {
      x = s.uniform();
    } else {  // student t with `param` degrees of freedom
      const double chi2 = 2.0 * s.gamma(param / 2.0);
      x = s.normal() / std::sqrt(chi2 / param);
    }
  }
  double mean = 0.0;
  for (double x : e) mean += x;
  mean /= static_cast<double>(d);
  for (double& x : e) x = base + spread * (x - mean);
  return e;
}

void tpch(const WorkloadSpec& spec, std::uint64_t seed, Workload& w) {
  const TpchParams& tp = spec.tpch;
  const std::size_t n = spec.n;
  KeyedStream s(derive_seed(seed, "tpch"), 0, 0);
  std::vector<double> quantity(n), revenue(n);
  for (std::size_t i = 0; i < n; ++i) {
    quantity[i] = round_to(uniform_in(s, tp.quantity_lo, tp.quantity_hi), 1e-4);
    revenue[i] = round_to(uniform_in(s, tp.revenue_lo, tp.revenue_hi), 0.01);
  }
  const std::int64_t d_min =
      *std::min_element(tp.sources.begin(), tp.sources.end());
  struct Noise {
    const char* attr;
    const char* family;
  };
  const Noise noises[] = {{"quantity_exp", "exponential"},
                          {"quantity_poi", "poisson"},
                          {"quantity_uni", "uniform"},
                          {"quantity_t", "student_t"}};
  for (std::int64_t d : tp.sources) {
    const std::string name = fmt::format("tpch_{}", d);
    KeyedStream ns(derive_seed(seed, "tpch-sources", static_cast<std::uint64_t>(d)),
                   0, 0);
    Table t(n);
    t.add("quantity", quantity);
    t.add("revenue_base", revenue);
    json a = json::object();
    for (const Noise& nz : noises) {
      const std::string fam = nz.family;
      const double param = fam == "exponential" ? 1.0
                           : fam == "poisson"
                               ? (d == d_min ? tp.poisson_rate_few
                                             : tp.poisson_rate_many)
                           : fam == "student_t" ? tp.student_df
                                                : 0.0;
      std::vector<std::vector<double>> src(static_cast<std::size_t>(d),
                                           std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i) {
        auto e = anchored(ns, quantity[i], d, fam, param, 1.0);
        for (std::size_t j = 0; j < e.size(); ++j) src[j][i] = e[j];
      }
      json cols = json::array();
      for (std::size_t j = 0; j < src.size(); ++j) {
        const std::string col = fmt::format("{}_{}", nz.attr, j + 1);
        t.add(col, src[j]);
        cols.push_back(col);
      }
      a[nz.attr] = {{"family", "discrete"}, {"sources", cols}};
    }
    std::vector<std::vector<double>> rsrc(static_cast<std::size_t>(d),
                                          std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      auto e = anchored(ns, revenue[i], d, "exponential", 1.0,
                        tp.revenue_noise * revenue[i]);
      for (std::size_t j = 0; j < e.size(); ++j) rsrc[j][i] = e[j];
    }
    json rcols = json::array();
    for (std::size_t j = 0; j < rsrc.size(); ++j) {
      const std::string col = fmt::format("revenue_{}", j + 1);
      t.add(col, rsrc[j]);
      rcols.push_back(col);
    }
    a["revenue"] = {{"family", "discrete"}, {"sources", rcols}};
    json specs = {{"table", name}, {"attributes", a}};
    w.datasets.push_back(make_dataset(name, n, t, specs));
  }

  const std::int64_t d_max =
      *std::max_element(tp.sources.begin(), tp.sources.end());
  struct Row {
    const char* attr;
    bool many;
    double p;
    double v;
  };
  const Row rows[] = {
      {"quantity_exp", false, 0.9, 15}, {"quantity_exp", true, 0.95, 7},
      {"quantity_poi", false, 0.9, 15}, {"quantity_poi", true, 0.9, 10},
      {"quantity_uni", false, 0.9, 15}, {"quantity_uni", true, 0.95, 7},
      {"quantity_t", false, 0.9, 29},   {"quantity_t", true, 0.95, 7},
  };
  int k = 0;
  for (const Row& r : rows) {
    const std::int64_t d = r.many ? d_max : d_min;
    WorkloadQuery q;
    q.name = fmt::format("Q{}", ++k);
    q.dataset = fmt::format("tpch_{}", d);
    q.file = q.name + ".spaql";
    q.p = r.p;
    q.v = r.v * spec.v_scale;
    q.supportiveness = "independent";
    q.features = fmt::format("{} sources, {}", d, r.attr);
    q.text = fmt::format(
        "SELECT PACKAGE(*) FROM {0} SUCH THAT\n"
        "  COUNT(*) BETWEEN 1 AND 10 AND\n"
        "  SUM({1}) <= {2} WITH PROBABILITY >= {3}\n"
        "MAXIMIZE PROBABILITY OF(SUM(revenue) >= {4})\n",
        q.dataset, r.attr, num(q.v), prob_text(q.p), num(tp.revenue_threshold));
    w.queries.push_back(std::move(q));
  }
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const json& j, std::initializer_list<const char*> keys,
                const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    (void)v;
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) {
      throw ArgumentError("unknown workload setting '" + where + k + "'");
    }
  }
}

}  // namespace

const char* workload_family_name(WorkloadFamily f) {
  switch (f) {
    case WorkloadFamily::kGalaxy: return "galaxy";
    case WorkloadFamily::kPortfolio: return "portfolio";
    case WorkloadFamily::kTpch: return "tpch";
  }
  return "?";
}

WorkloadFamily workload_family_from_name(const std::string& name) {
  if (name == "galaxy") return WorkloadFamily::kGalaxy;
  if (name == "portfolio") return WorkloadFamily::kPortfolio;
  if (name == "tpch") return WorkloadFamily::kTpch;
  throw ArgumentError("unknown workload family '" + name +
                      "' (galaxy, portfolio, tpch)");
}

void WorkloadSpec::check() const {
  if (n < 1) throw ArgumentError("workload needs n >= 1");
  if (!(v_scale > 0)) throw ArgumentError("v_scale must be positive");
  const GalaxyParams& g = galaxy;
  if (!(g.base_lo < g.base_hi) || !(g.sigma >= 0) || !(g.sigma_star >= 0) ||
      !(g.pareto_scale > 0) || !(g.pareto_shape > 0) ||
      !(g.pareto_scale_star >= 0) || !(g.pareto_scale_star_wide >= 0) ||
      !(g.min_spread > 0)) {
    throw ArgumentError("invalid galaxy parameters");
  }
  const PortfolioParams& p = portfolio;
  if (!(p.price_lo > 0 && p.price_lo < p.price_hi) || !(p.vol_lo >= 0) ||
      !(p.vol_lo <= p.vol_hi) || !(p.drift_sd >= 0) || p.short_days < 1 ||
      p.long_days < 1 || !(p.volatile_fraction > 0 && p.volatile_fraction <= 1) ||
      !(p.budget > 0)) {
    throw ArgumentError("invalid portfolio parameters");
  }
  const TpchParams& t = tpch;
  if (t.sources.empty() ||
      std::any_of(t.sources.begin(), t.sources.end(),
                  [](std::int64_t d) { return d < 1; }) ||
      !(t.quantity_lo < t.quantity_hi) || !(t.revenue_lo < t.revenue_hi) ||
      !(t.revenue_noise >= 0) || !(t.poisson_rate_few > 0) ||
      !(t.poisson_rate_many > 0) || !(t.student_df > 0)) {
    throw ArgumentError("invalid tpch parameters");
  }
}

WorkloadSpec workload_spec_from_json(const std::string& text,
                                     WorkloadSpec spec) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad workload JSON: ") + e.what());
  }
  try {
    check_keys(j, {"family", "n", "v_scale", "galaxy", "portfolio", "tpch"}, "");
    if (j.contains("family")) {
      spec.family = workload_family_from_name(j["family"].get<std::string>());
    }
    take(j, "n", spec.n);
    take(j, "v_scale", spec.v_scale);
    if (j.contains("galaxy")) {
      const json& g = j["galaxy"];
      check_keys(g, {"base_lo", "base_hi", "sigma", "sigma_star", "pareto_scale",
                     "pareto_scale_star", "pareto_scale_star_wide",
                     "pareto_shape", "min_spread"},
                 "galaxy.");
      GalaxyParams& p = spec.galaxy;
      take(g, "base_lo", p.base_lo);
      take(g, "base_hi", p.base_hi);
      take(g, "sigma", p.sigma);
      take(g, "sigma_star", p.sigma_star);
      take(g, "pareto_scale", p.pareto_scale);
      take(g, "pareto_scale_star", p.pareto_scale_star);
      take(g, "pareto_scale_star_wide", p.pareto_scale_star_wide);
      take(g, "pareto_shape", p.pareto_shape);
      take(g, "min_spread", p.min_spread);
    }
    if (j.contains("portfolio")) {
      const json& g = j["portfolio"];
      check_keys(g, {"price_lo", "price_hi", "drift_mean", "drift_sd", "vol_lo",
                     "vol_hi", "budget", "short_days", "long_days",
                     "volatile_fraction"},
                 "portfolio.");
      PortfolioParams& p = spec.portfolio;
      take(g, "price_lo", p.price_lo);
      take(g, "price_hi", p.price_hi);
      take(g, "drift_mean", p.drift_mean);
      take(g, "drift_sd", p.drift_sd);
      take(g, "vol_lo", p.vol_lo);
      take(g, "vol_hi", p.vol_hi);
      take(g, "budget", p.budget);
      take(g, "short_days", p.short_days);
      take(g, "long_days", p.long_days);
      take(g, "volatile_fraction", p.volatile_fraction);
    }
    if (j.contains("tpch")) {
      const json& g = j["tpch"];
      check_keys(g, {"sources", "quantity_lo", "quantity_hi", "revenue_lo",
                     "revenue_hi", "revenue_noise", "revenue_threshold",
                     "poisson_rate_few", "poisson_rate_many", "student_df"},
                 "tpch.");
      TpchParams& p = spec.tpch;
      take(g, "sources", p.sources);
      take(g, "quantity_lo", p.quantity_lo);
      take(g, "quantity_hi", p.quantity_hi);
      take(g, "revenue_lo", p.revenue_lo);
      take(g, "revenue_hi", p.revenue_hi);
      take(g, "revenue_noise", p.revenue_noise);
      take(g, "revenue_threshold", p.revenue_threshold);
      take(g, "poisson_rate_few", p.poisson_rate_few);
      take(g, "poisson_rate_many", p.poisson_rate_many);
      take(g, "student_df", p.student_df);
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad workload setting: ") + e.what());
  }
  spec.check();
  return spec;
}

std::string Workload::manifest_json() const {
  json j;
  j["schema_version"] = 1;
  j["family"] = workload_family_name(spec.family);
  j["n"] = spec.n;
  j["seed"] = seed;
  j["v_scale"] = spec.v_scale;
  j["datasets"] = json::array();
  for (const WorkloadDataset& d : datasets) {
    j["datasets"].push_back({{"name", d.name},
                             {"csv", d.csv_file},
                             {"specs", d.specs_file},
                             {"n", d.n}});
  }
  j["queries"] = json::array();
  for (const WorkloadQuery& q : queries) {
    j["queries"].push_back({{"name", q.name},
                            {"dataset", q.dataset},
                            {"file", q.file},
                            {"p", q.p},
                            {"v", q.v},
                            {"supportiveness", q.supportiveness},
                            {"features", q.features}});
  }
  return j.dump(2) + "\n";
}

Workload build_workload(const WorkloadSpec& spec, std::uint64_t seed) {
  spec.check();
  Workload w;
  w.spec = spec;
  w.seed = seed;
  switch (spec.family) {
    case WorkloadFamily::kGalaxy: galaxy(spec, seed, w); break;
    case WorkloadFamily::kPortfolio: portfolio(spec, seed, w); break;
    case WorkloadFamily::kTpch: tpch(spec, seed, w); break;
  }
  return w;
}

Workload generate_workload(const WorkloadSpec& spec, std::uint64_t seed,
                           const std::string& dir) {
  Workload w = build_workload(spec, seed);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  const fs::path root(dir);
  for (const WorkloadDataset& d : w.datasets) {
    write_text_file((root / d.csv_file).string(), d.csv);
    write_text_file((root / d.specs_file).string(), d.specs);
  }
  for (const WorkloadQuery& q : w.queries) {
    write_text_file((root / q.file).string(), q.text);
  }
  write_text_file((root / "manifest.json").string(), w.manifest_json());
  return w;
}

int feasibility_bucket(double rate) {
  const int b = static_cast<int>(std::floor(rate * 4.0 + 1e-9));
  return std::clamp(b, 0, 4) * 25;
}

namespace {

std::optional<double> ratio_to_best(double omega, double best, Sense sense) {
  try {
    return 1.0 + epsilon_q(omega, best, best, sense).epsilon;
  } catch (const CaseError&) {
    return std::nullopt;
  }
}

json opt(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string opt_csv(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

}  // namespace

BenchReport run_benchmark(const std::string& workload_dir,
                          const BenchConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path root(workload_dir);
  json manifest;
  try {
    manifest = json::parse(read_text_file((root / "manifest.json").string()));
  } catch (const json::exception& e) {
    throw IoError(std::string("bad manifest.json: ") + e.what());
  }
  for (const std::string& a : cfg.algorithms) {
    if (a != "naive" && a != "summarysearch") {
      throw ArgumentError("unknown algorithm '" + a +
                          "' (naive, summarysearch)");
    }
  }
  if (cfg.seeds.empty() || cfg.m_grid.empty() || cfg.z_grid.empty()) {
    throw ArgumentError("benchmark needs seeds, an M grid and a Z grid");
  }

  std::map<std::string, Relation> relations;
  for (const json& d : manifest.at("datasets")) {
    relations.emplace(d.at("name").get<std::string>(),
                      load_relation((root / d.at("csv").get<std::string>()).string(),
                                    (root / d.at("specs").get<std::string>()).string()));
  }
  struct Item {
    std::string name;
    std::string dataset;
    QueryIR ir;
  };
  std::vector<Item> items;
  for (const json& q : manifest.at("queries")) {
    const std::string name = q.at("name").get<std::string>();
    if (!cfg.queries.empty() &&
        std::find(cfg.queries.begin(), cfg.queries.end(), name) ==
            cfg.queries.end()) {
      continue;
    }
    const std::string ds = q.at("dataset").get<std::string>();
    const std::string text =
        read_text_file((root / q.at("file").get<std::string>()).string());
    items.push_back({name, ds, compile_query(text, relations.at(ds))});
  }

  // One work cell per (query, seed); rows are stored by cell so the report
  // order never depends on scheduling.
  const std::size_t n_seeds = cfg.seeds.size();
  std::vector<std::vector<BenchRow>> cells(items.size() * n_seeds);
  for_each_chunk(cells.size(), 1, cfg.jobs,
                 [&](std::size_t c, std::size_t, std::size_t) {
    const Item& it = items[c / n_seeds];
    const std::uint64_t seed = cfg.seeds[c % n_seeds];
    const Relation& rel = relations.at(it.dataset);
    for (const std::string& algo : cfg.algorithms) {
      const bool ss = algo == "summarysearch";
      for (std::size_t m : cfg.m_grid) {
        const std::vector<std::size_t> zs =
            ss ? cfg.z_grid : std::vector<std::size_t>{0};
        for (std::size_t z : zs) {
          if (ss && z > m) continue;
          BenchRow row;
          row.query = it.name;
          row.dataset = it.dataset;
          row.algorithm = algo;
          row.seed = seed;
          row.m = m;
          row.z = z;
          RunConfig rc = cfg.run;
          rc.seed = seed;
          rc.validation_seed = derive_seed(cfg.validation_seed, "bench-validation");
          rc.fixed_m = true;
          rc.m0 = m;
          rc.z0 = std::max<std::size_t>(z, 1);
          rc.jobs = 1;
          const auto t0 = std::chrono::steady_clock::now();
          try {
            RunContext ctx = prepare_run(it.ir, rel, rc);
            RunResult r = ss ? summary_search(ctx, rc) : naive(ctx, rc);
            row.feasible = r.success;
            row.certified = r.certified;
            row.status = r.success ? "feasible" : "infeasible";
            for (const TraceEntry& e : r.trace) {
              if (e.solver_status == status_name(SolveStatus::kTimeLimitBest)) {
                if (!r.success) row.status = "time_limit";
              }
            }
            if (!r.package.empty() || r.success) {
              row.package_size = r.package.size();
              row.package = r.package.to_string();
            }
            if (r.success && it.ir.objective.kind != ObjectiveKind::kNone) {
              row.omega = r.report.omega;
            }
            if (!r.failure.empty()) row.message = r.failure;
          } catch (const Error& e) {
            row.status = "error";
            row.message = std::string(e.kind()) + ": " + e.what();
          }
          row.wall_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
          cells[c].push_back(std::move(row));
        }
      }
    }
  });

  BenchReport rep;
  for (auto& cell : cells) {
    for (BenchRow& r : cell) rep.rows.push_back(std::move(r));
  }
  // Best feasible objective per query (canonical sense), then ratios.
  for (const Item& it : items) {
    const Sense sense = it.ir.objective.sense;
    std::optional<double> best;
    for (const BenchRow& r : rep.rows) {
      if (r.query != it.name || !r.omega) continue;
      if (!best || (sense == Sense::kMinimize ? *r.omega < *best
                                              : *r.omega > *best)) {
        best = r.omega;
      }
    }
    if (!best) continue;
    rep.omega_star.emplace_back(it.name, *best);
    for (BenchRow& r : rep.rows) {
      if (r.query == it.name && r.omega) {
        r.ratio = ratio_to_best(*r.omega, *best, sense);
      }
    }
  }
  // Feasibility rate per (query, algorithm, M, Z).
  for (const BenchRow& r : rep.rows) {
    auto c = std::find_if(rep.cells.begin(), rep.cells.end(), [&](const BenchCell& b) {
      return b.query == r.query && b.algorithm == r.algorithm && b.m == r.m &&
             b.z == r.z;
    });
    if (c == rep.cells.end()) {
      BenchCell b;
      b.query = r.query;
      b.algorithm = r.algorithm;
      b.m = r.m;
      b.z = r.z;
      rep.cells.push_back(b);
      c = rep.cells.end() - 1;
    }
    c->runs += 1;
    c->feasible += r.feasible ? 1 : 0;
    c->mean_wall_s += r.wall_s;
  }
  for (BenchCell& c : rep.cells) {
    c.rate = static_cast<double>(c.feasible) / static_cast<double>(c.runs);
    c.bucket = feasibility_bucket(c.rate);
    c.mean_wall_s /= static_cast<double>(c.runs);
    double sum = 0.0;
    std::size_t k = 0;
    for (const BenchRow& r : rep.rows) {
      if (r.query == c.query && r.algorithm == c.algorithm && r.m == c.m &&
          r.z == c.z && r.ratio) {
        sum += *r.ratio;
        ++k;
      }
    }
    if (k > 0) c.mean_ratio = sum / static_cast<double>(k);
  }
  return rep;
}

std::string BenchReport::to_csv(bool timings) const {
  std::string out =
      "query,dataset,algorithm,seed,m,z,status,feasible,certified,omega,ratio,"
      "package_size,package";
  if (timings) out += ",wall_s";
  out += "\n";
  for (const BenchRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},\"{}\"", r.query,
                       r.dataset, r.algorithm, r.seed, r.m, r.z, r.status,
                       r.feasible ? 1 : 0, r.certified ? 1 : 0, opt_csv(r.omega),
                       opt_csv(r.ratio), r.package_size, r.package);
    if (timings) out += fmt::format(",{}", r.wall_s);
    out += "\n";
  }
  return out;
}

std::string BenchReport::to_json(bool timings) const {
  json j;
  j["schema_version"] = 1;
  j["rows"] = json::array();
  for (const BenchRow& r : rows) {
    json row = {{"query", r.query},
                {"dataset", r.dataset},
                {"algorithm", r.algorithm},
                {"seed", r.seed},
                {"m", r.m},
                {"z", r.z},
                {"status", r.status},
                {"feasible", r.feasible},
                {"certified", r.certified},
                {"omega", opt(r.omega)},
                {"ratio", opt(r.ratio)},
                {"package_size", r.package_size},
                {"package", r.package},
                {"message", r.message}};
    if (timings) row["wall_s"] = r.wall_s;
    j["rows"].push_back(row);
  }
  j["cells"] = json::array();
  for (const BenchCell& c : cells) {
    json cell = {{"query", c.query},
                 {"algorithm", c.algorithm},
                 {"m", c.m},
                 {"z", c.z},
                 {"runs", c.runs},
                 {"feasible", c.feasible},
                 {"rate", c.rate},
                 {"bucket", c.bucket},
                 {"mean_ratio", opt(c.mean_ratio)}};
    if (timings) cell["mean_wall_s"] = c.mean_wall_s;
    j["cells"].push_back(cell);
  }
  j["omega_star"] = json::object();
  for (const auto& [q, v] : omega_star) j["omega_star"][q] = v;
  return j.dump(2) + "\n";
}

}  // namespace spq

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

#include "spq/result_json.hpp"

#include <fmt/format.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "spq/bounds.hpp"
#include "spq/errors.hpp"
#include "spq/summary.hpp"

namespace spq {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json package_json(const Package& x) {
  json t = json::array();
  for (const auto& [id, c] : x.entries()) t.push_back({{"id", id}, {"count", c}});
  return {{"tuples", t}, {"size", x.size()}};
}

json report_json(const ValidationReport& r) {
  json cons = json::array();
  for (const ConstraintReport& c : r.constraints) {
    cons.push_back({{"index", c.index},
                    {"label", c.label},
                    {"p", c.p},
                    {"satisfied", c.satisfied},
                    {"required", c.required},
                    {"surplus", number(c.surplus)},
                    {"gamma", number(c.gamma)}});
  }
  return {{"feasible", r.is_feasible},
          {"reason", r.reason},
          {"streamed", r.streamed},
          {"m_hat", r.m_hat},
          {"omega", number(r.omega)},
          {"omega_user", number(r.omega_user)},
          {"epsilon_upper", number(r.epsilon_upper)},
          {"constraints", cons}};
}

json candidates(const std::vector<BoundCandidate>& v) {
  json out = json::array();
  for (const BoundCandidate& c : v) {
    out.push_back({{"source", c.source},
                   {"value", number(c.value)},
                   {"applicable", c.applicable}});
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const char* library_version() { return "1.0.0"; }

std::string package_to_json(const Package& x) {
  return package_json(x).dump(2) + "\n";
}

Package package_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("bad package JSON: ") + e.what());
  }
  Package x;
  auto put = [&](std::int64_t id, std::int64_t c) {
    if (id < 1) throw IoError("package tuple ids are 1-based");
    if (c < 0) throw IoError("package counts must be nonnegative");
    x.set(static_cast<TupleId>(id), x.get(static_cast<TupleId>(id)) + c);
  };
  try {
    const json* list = &j;
    if (j.is_object() && j.contains("tuples")) list = &j["tuples"];
    if (list->is_array()) {
      for (const json& e : *list) {
        put(e.at("id").get<std::int64_t>(), e.value("count", std::int64_t{1}));
      }
    } else if (j.is_object()) {
      for (const auto& [k, v] : j.items()) put(std::stoll(k), v.get<std::int64_t>());
    } else {
      throw IoError("package JSON must be an object or a list");
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("bad package JSON: ") + e.what());
  } catch (const std::logic_error&) {
    throw IoError("bad package JSON: tuple ids must be integers");
  }
  return x;
}

std::string report_to_json(const ValidationReport& r) {
  return report_json(r).dump(2) + "\n";
}

std::string config_json(const RunConfig& c) {
  json j = {{"m0", c.m0},
            {"m_increment", c.m_increment},
            {"z_increment", c.z_increment},
            {"m_hat", c.m_hat},
            {"m_cap", c.m_cap},
            {"epsilon", c.epsilon},
            {"time_limit_s", c.time_limit_s},
            {"node_limit", c.node_limit},
            {"seed", c.seed},
            {"validation_seed", c.validation_seed ? json(*c.validation_seed)
                                                  : json(nullptr)},
            {"strategy", strategy_name(c.strategy)},
            {"reorder", c.reorder},
            {"csa_iteration_cap", c.csa_iteration_cap},
            {"csa_call_cap", c.csa_call_cap},
            {"default_cap", c.default_cap},
            {"fixed_m", c.fixed_m},
            {"z0", c.z0}};
  return j.dump();
}

std::string config_hash(const ResultMeta& m) {
  const std::string blob = m.command + '\n' + m.algorithm + '\n' +
                           config_json(m.config) + '\n' + m.query_text + '\n' +
                           m.relation_csv + '\n' + m.relation_specs;
  return fmt::format("{:016x}", fnv1a(blob));
}

std::string result_to_json(const RunResult& r, const ResultMeta& meta,
                           bool timings) {
  json j;
  j["schema_version"] = kResultSchemaVersion;
  j["tool"] = {{"name", "spq"}, {"version", library_version()}};
  j["command"] = meta.command;
  j["config"] = json::parse(config_json(meta.config));
  j["config_hash"] = config_hash(meta);
  j["seeds"] = {{"seed", meta.config.seed},
                {"optimization", optimization_seed(meta.config)},
                {"validation", validation_seed(meta.config)}};
  j["input"] = {{"query", meta.query_text},
                {"relation", meta.relation_csv},
                {"specs", meta.relation_specs}};
  json res;
  res["algorithm"] = r.algorithm;
  res["success"] = r.success;
  res["certified"] = r.certified;
  res["package"] = package_json(r.package);
  res["report"] = report_json(r.report);
  if (r.certificate) {
    res["certificate"] = {{"epsilon", number(r.certificate->epsilon)},
                          {"case", case_name(r.certificate->certificate)},
                          {"guarantee", r.certificate->guarantee}};
  } else {
    res["certificate"] = nullptr;
  }
  if (r.bounds) {
    res["bounds"] = {{"lower", number(r.bounds->lower)},
                     {"upper", number(r.bounds->upper)},
                     {"lower_candidates", candidates(r.bounds->lower_candidates)},
                     {"upper_candidates", candidates(r.bounds->upper_candidates)}};
  } else {
    res["bounds"] = nullptr;
  }
  res["epsilon_min"] = r.epsilon_min ? number(*r.epsilon_min) : json(nullptr);
  res["final_m"] = r.final_m;
  res["final_z"] = r.final_z;
  res["csa_calls"] = r.csa_calls;
  res["failure"] = r.failure;
  j["result"] = res;
  json trace = json::array();
  for (const TraceEntry& e : r.trace) {
    json t = {{"stage", e.stage},
              {"m", e.m},
              {"z", e.z},
              {"iteration", e.iteration},
              {"alpha", e.alpha},
              {"package", package_json(e.x)},
              {"solver_status", e.solver_status},
              {"nodes", e.nodes},
              {"validated", e.validated},
              {"feasible", e.feasible},
              {"omega", number(e.omega)},
              {"epsilon", e.epsilon ? number(*e.epsilon) : json(nullptr)},
              {"note", e.note}};
    json s = json::array();
    for (double v : e.surplus) s.push_back(number(v));
    t["surplus"] = s;
    trace.push_back(t);
  }
  j["trace"] = trace;
  j["warnings"] = r.warnings;
  if (timings) j["timings"] = {{"wall_s", meta.wall_s}};
  return j.dump(2) + "\n";
}

}  // namespace spq

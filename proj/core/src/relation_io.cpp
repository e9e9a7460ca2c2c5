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

#include "spq/relation_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spq/errors.hpp"

namespace spq {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\"");
  std::size_t e = s.find_last_not_of(" \t\r\"");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line,
                    const std::string& col) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("line " + std::to_string(line) + ": column '" + col +
                  "' is not numeric: '" + s + "'");
  }
  return v;
}

Param parse_param(const json& j, const std::map<std::string,
                  std::vector<double>>& columns, const std::string& key) {
  if (j.is_number()) return Param(j.get<double>());
  if (j.is_string()) {
    auto it = columns.find(j.get<std::string>());
    if (it == columns.end()) {
      throw SpecError("parameter '" + key + "' refers to unknown column '" +
                      j.get<std::string>() + "'");
    }
    return Param(it->second);
  }
  throw SpecError("parameter '" + key + "' must be a number or column name");
}

}  // namespace

Relation parse_relation(const std::string& csv_text,
                        const std::string& specs_json,
                        const std::string& default_name) {
  std::istringstream in(csv_text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw IoError("relation CSV has no header row");
  std::vector<std::vector<double>> cols(header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (cells.size() != header.size()) {
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " fields, got " +
                    std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      cols[c].push_back(parse_number(cells[c], line_no, header[c]));
    }
  }
  const std::size_t n = cols.front().size();
  if (n == 0) throw IoError("relation CSV has no rows");

  json specs = specs_json.empty() ? json::object() : json::parse(specs_json);
  std::string name = specs.value("table", default_name);
  Relation rel(name, n);

  std::map<std::string, std::vector<double>> columns;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "id") {
      for (std::size_t i = 0; i < n; ++i) {
        if (cols[c][i] != static_cast<double>(i + 1)) {
          throw IoError("id column must be 1..N without gaps");
        }
      }
      continue;
    }
    if (columns.count(header[c])) {
      throw IoError("duplicate column '" + header[c] + "'");
    }
    columns[header[c]] = cols[c];
  }
  for (const auto& [k, v] : columns) rel.add_deterministic(k, v);

  if (specs.contains("attributes")) {
    for (const auto& [attr, decl] : specs["attributes"].items()) {
      VGSpec spec;
      spec.family = family_from_name(decl.at("family").get<std::string>());
      if (decl.contains("params")) {
        for (const auto& [key, val] : decl["params"].items()) {
          spec.params[key] = parse_param(val, columns, key);
        }
      }
      if (decl.contains("sources")) {
        for (const auto& src : decl["sources"]) {
          auto it = columns.find(src.get<std::string>());
          if (it == columns.end()) {
            throw SpecError("unknown source column '" +
                            src.get<std::string>() + "'");
          }
          spec.sources.push_back(it->second);
        }
      }
      if (decl.contains("group")) {
        auto it = columns.find(decl["group"].get<std::string>());
        if (it == columns.end()) throw SpecError("unknown group column");
        for (double g : it->second) {
          spec.groups.push_back(static_cast<std::int64_t>(g));
        }
      }
      if (decl.contains("output")) {
        std::string o = decl["output"].get<std::string>();
        if (o == "gain") {
          spec.output = GbmOutput::kGain;
        } else if (o == "price") {
          spec.output = GbmOutput::kPrice;
        } else {
          throw SpecError("gbm output must be 'gain' or 'price'");
        }
      }
      rel.add_stochastic(attr, std::move(spec));
    }
  }
  return rel;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

Relation load_relation(const std::string& csv_path,
                       const std::string& specs_path) {
  std::string specs = specs_path.empty() ? "" : read_text_file(specs_path);
  try {
    return parse_relation(read_text_file(csv_path), specs,
                          std::filesystem::path(csv_path).stem().string());
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("bad specs JSON '" + specs_path + "': " + e.what());
  }
}

}  // namespace spq

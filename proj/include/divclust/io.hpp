// Copyright 2026 The Authors.
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

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "divclust/errors.hpp"
#include "divclust/instance.hpp"
#include "divclust/metric.hpp"

namespace divclust {

namespace detail {

inline MetricValidation validation_from_string(const std::string& s) {
  if (s == "auto") return MetricValidation::automatic;
  if (s == "on") return MetricValidation::on;
  if (s == "off") return MetricValidation::off;
  throw SchemaError("validate_metric", "expected auto|on|off, got '" + s + "'");
}

inline std::vector<int> int_array(const nlohmann::json& j,
                                  const std::string& field) {
  if (!j.is_array()) throw SchemaError(field, "expected an array of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw SchemaError(field, "non-integer entry");
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace detail

// Instance JSON schema (samples/e1.json is the canonical example):
//   objective    "median" | "means" | "supplier"
//   k            positive integer
//   coordinates  n rows of equal dimension (Euclidean adapter), or
//   distances    explicit n x n matrix
//   clients      point ids
//   facilities   point ids
//   groups       array of facility-id arrays
//   requirements per-group lower bounds (same length as groups)
//   validate_metric  optional "auto" | "on" | "off" (default auto)
inline DiversityInstance instance_from_json(const nlohmann::json& j) {
  auto require = [&](const char* field) -> const nlohmann::json& {
    if (!j.contains(field)) throw SchemaError(field, "missing");
    return j.at(field);
  };
  DiversityInstance inst;
  if (!require("objective").is_string())
    throw SchemaError("objective", "expected a string");
  inst.objective = objective_from_string(j["objective"].get<std::string>());
  if (!require("k").is_number_integer())
    throw SchemaError("k", "expected an integer");
  inst.k = j["k"].get<int>();

  std::vector<int> clients = detail::int_array(require("clients"), "clients");
  std::vector<int> facilities =
      detail::int_array(require("facilities"), "facilities");
  MetricValidation validation = MetricValidation::automatic;
  if (j.contains("validate_metric"))
    validation =
        detail::validation_from_string(j["validate_metric"].get<std::string>());
  std::sort(clients.begin(), clients.end());
  std::sort(facilities.begin(), facilities.end());

  if (j.contains("distances") && j.contains("coordinates"))
    throw SchemaError("distances", "give either distances or coordinates");
  if (j.contains("distances")) {
    const auto& m = j["distances"];
    if (!m.is_array()) throw SchemaError("distances", "expected a matrix");
    int n = static_cast<int>(m.size());
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : m) {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw SchemaError("distances", "matrix is not square");
      for (const auto& v : row) {
        if (!v.is_number()) throw SchemaError("distances", "non-numeric entry");
        entries.push_back(v.get<double>());
      }
    }
    inst.metric = std::make_shared<DistanceMatrix>(
        n, std::move(entries), std::move(clients), std::move(facilities),
        validation);
  } else if (j.contains("coordinates")) {
    const auto& m = j["coordinates"];
    if (!m.is_array() || m.empty())
      throw SchemaError("coordinates", "expected a non-empty array of rows");
    std::vector<std::vector<double>> pts;
    for (const auto& row : m) {
      if (!row.is_array()) throw SchemaError("coordinates", "row is not an array");
      std::vector<double> pt;
      for (const auto& v : row) {
        if (!v.is_number())
          throw SchemaError("coordinates", "non-numeric entry");
        pt.push_back(v.get<double>());
      }
      pts.push_back(std::move(pt));
    }
    inst.metric = std::make_shared<DistanceMatrix>(DistanceMatrix::from_coordinates(
        pts, std::move(clients), std::move(facilities), validation));
  } else {
    throw SchemaError("distances", "missing (or provide coordinates)");
  }

  const auto& groups = require("groups");
  if (!groups.is_array() || groups.empty())
    throw SchemaError("groups", "expected a non-empty array of arrays");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto g = detail::int_array(groups[i], "groups");
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    inst.groups.push_back(std::move(g));
  }
  inst.requirements = detail::int_array(require("requirements"), "requirements");
  inst.validate();
  return inst;
}

inline nlohmann::json instance_to_json(const DiversityInstance& inst) {
  nlohmann::json j;
  j["objective"] = to_string(inst.objective);
  j["k"] = inst.k;
  const DistanceMatrix& d = inst.d();
  nlohmann::json matrix = nlohmann::json::array();
  for (int u = 0; u < d.size(); ++u) {
    nlohmann::json row = nlohmann::json::array();
    for (int v = 0; v < d.size(); ++v) row.push_back(d(u, v));
    matrix.push_back(std::move(row));
  }
  j["distances"] = std::move(matrix);
  j["clients"] = d.clients();
  j["facilities"] = d.facilities();
  j["groups"] = inst.groups;
  j["requirements"] = inst.requirements;
  // Emitted matrices may be intentionally non-metric (adversarial
  // generators), so round-trips skip re-validation.
  j["validate_metric"] = "off";
  return j;
}

inline DiversityInstance load_instance_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

// csv-points rows: id, x1..xd, is_client, is_facility, groups, where groups
// is a semicolon-separated list of tags. Group order is the sorted tag
// order; k, per-tag requirements and the objective come from the caller.
inline DiversityInstance load_instance_csv(
    const std::string& path, int k,
    const std::map<std::string, int>& requirements, Objective objective,
    MetricValidation validation = MetricValidation::automatic) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty csv file");

  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (ch == sep) {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    out.push_back(cur);
    return out;
  };

  std::vector<std::string> header = split(line, ',');
  if (header.size() < 4 || header.front() != "id" || header.back() != "groups")
    throw SchemaError("header", "expected id,x1..xd,is_client,is_facility,groups");
  int dim = static_cast<int>(header.size()) - 4;
  if (dim < 1) throw SchemaError("header", "no coordinate columns");

  std::vector<std::vector<double>> pts;
  std::vector<int> clients, facilities;
  std::map<int, int> row_of_id;
  std::map<std::string, std::vector<int>> tag_members;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells = split(line, ',');
    if (static_cast<int>(cells.size()) != dim + 4)
      throw SchemaError("row " + std::to_string(lineno), "wrong column count");
    int id;
    try {
      id = std::stoi(cells[0]);
    } catch (...) {
      throw SchemaError("id", "non-integer id on row " + std::to_string(lineno));
    }
    if (row_of_id.count(id))
      throw SchemaError("id", "duplicate point id " + std::to_string(id));
    int row = static_cast<int>(pts.size());
    row_of_id[id] = row;
    std::vector<double> pt(dim);
    for (int d = 0; d < dim; ++d) {
      try {
        pt[d] = std::stod(cells[1 + d]);
      } catch (...) {
        throw SchemaError(header[1 + d],
                          "non-numeric value on row " + std::to_string(lineno));
      }
    }
    pts.push_back(std::move(pt));
    if (cells[dim + 1] == "1") clients.push_back(row);
    if (cells[dim + 2] == "1") facilities.push_back(row);
    if (!cells[dim + 3].empty())
      for (const std::string& tag : split(cells[dim + 3], ';'))
        if (!tag.empty()) tag_members[tag].push_back(row);
  }

  DiversityInstance inst;
  inst.metric = std::make_shared<DistanceMatrix>(DistanceMatrix::from_coordinates(
      pts, std::move(clients), std::move(facilities), validation));
  inst.k = k;
  inst.objective = objective;
  for (const auto& [tag, r] : requirements)
    if (!tag_members.count(tag))
      throw SchemaError("requirements", "unknown group tag '" + tag + "'");
  for (auto& [tag, members] : tag_members) {
    inst.groups.push_back(members);
    auto it = requirements.find(tag);
    inst.requirements.push_back(it == requirements.end() ? 0 : it->second);
  }
  inst.validate();
  return inst;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Machine-readable run report: line-delimited `key: value` pairs in a fixed
// order, with all timing fields grouped at the end so downstream comparisons
// can mask them.
struct Report {
  // configuration echo
  std::string instance_label;
  std::string format = "json";
  std::string objective;
  std::string algorithm;
  double epsilon = 0.25;
  std::string coreset = "auto";
  std::string grid = "geometric";
  std::string fair_mode = "zero-copy";
  std::string threshold_search = "binary";
  std::uint64_t seed = 0;
  int threads = 1;
  // outcome
  std::string status = "ok";  // ok | infeasible
  std::vector<int> solution;
  double cost = 0;
  bool feasible = false;
  std::vector<std::string> certificate;
  std::uint64_t patterns_enumerated = 0;
  std::uint64_t patterns_feasible = 0;
  std::uint64_t guesses_examined = 0;
  std::uint64_t thresholds_examined = 0;
  std::size_t coreset_size = 0;
  bool coreset_active = false;
  bool search_anomaly = false;
  bool have_opt = false;
  double opt_cost = 0;
  // timing (masked by golden comparisons)
  double time_coreset_ms = 0;
  double time_solve_ms = 0;
  double time_oracle_ms = 0;
  double time_total_ms = 0;
};

inline std::string render_report(const Report& r) {
  std::ostringstream out;
  out << "divclust-report: v1\n";
  out << "instance: " << r.instance_label << "\n";
  out << "format: " << r.format << "\n";
  out << "objective: " << r.objective << "\n";
  out << "algorithm: " << r.algorithm << "\n";
  out << "epsilon: " << format_double(r.epsilon) << "\n";
  out << "coreset: " << r.coreset << "\n";
  out << "grid: " << r.grid << "\n";
  out << "fair_mode: " << r.fair_mode << "\n";
  out << "threshold_search: " << r.threshold_search << "\n";
  out << "seed: " << r.seed << "\n";
  out << "threads: " << r.threads << "\n";
  out << "status: " << r.status << "\n";
  out << "solution:";
  for (int f : r.solution) out << " " << f;
  out << "\n";
  out << "cost: " << format_double(r.cost) << "\n";
  out << "feasible: " << (r.feasible ? "yes" : "no") << "\n";
  out << "certificate:";
  for (const auto& c : r.certificate) out << " " << c;
  out << "\n";
  out << "patterns_enumerated: " << r.patterns_enumerated << "\n";
  out << "patterns_feasible: " << r.patterns_feasible << "\n";
  out << "guesses_examined: " << r.guesses_examined << "\n";
  out << "thresholds_examined: " << r.thresholds_examined << "\n";
  out << "coreset_size: " << r.coreset_size << "\n";
  out << "coreset_active: " << (r.coreset_active ? "yes" : "no") << "\n";
  out << "search_anomaly: " << (r.search_anomaly ? "yes" : "no") << "\n";
  if (r.have_opt) {
    out << "opt_cost: " << format_double(r.opt_cost) << "\n";
    out << "ratio: "
        << format_double(r.opt_cost > 0 ? r.cost / r.opt_cost
                                        : (r.cost == 0 ? 1.0 : 0.0))
        << "\n";
  }
  out << "time_coreset_ms: " << format_double(r.time_coreset_ms) << "\n";
  out << "time_solve_ms: " << format_double(r.time_solve_ms) << "\n";
  out << "time_oracle_ms: " << format_double(r.time_oracle_ms) << "\n";
  out << "time_total_ms: " << format_double(r.time_total_ms) << "\n";
  return out.str();
}

// Report text with the timing lines removed; the stable prefix is what
// golden-file tests byte-compare.
inline std::string canonicalize_report(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("time_", 0) != 0) out << line << "\n";
  return out.str();
}

}  // namespace divclust

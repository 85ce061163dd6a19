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

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "divclust/divclust.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::uint64_t oracle_cap_from_env() {
  const char* env = std::getenv("DIVCLUST_CAP");
  if (!env) return divclust::kDefaultOracleCap;
  try {
    return std::stoull(env);
  } catch (...) {
    throw divclust::BadParameter("DIVCLUST_CAP is not an integer");
  }
}

std::map<std::string, int> parse_requirements(const std::string& spec) {
  std::map<std::string, int> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    auto eq = cur.find('=');
    if (eq == std::string::npos)
      throw divclust::BadParameter("requirement '" + cur +
                                   "' is not tag=count");
    out[cur.substr(0, eq)] = std::stoi(cur.substr(eq + 1));
    cur.clear();
  };
  for (char ch : spec) {
    if (ch == ',')
      flush();
    else
      cur.push_back(ch);
  }
  flush();
  return out;
}

struct SolveConfig {
  std::string instance_path;
  std::string format = "json";
  std::string objective;  // empty = take from instance
  std::string algorithm = "fpt-submodular";
  double epsilon = 0.25;
  bool run_exact = false;
  std::string coreset = "auto";
  std::string grid = "geometric";
  std::string fair_mode = "zero-copy";
  std::string threshold_search = "binary";
  std::string inner = "greedy";
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_path;
  int csv_k = 0;
  std::string csv_requirements;
};

int run_solve(const SolveConfig& cfg) {
  auto t_start = Clock::now();
  divclust::Report report;
  report.instance_label = cfg.instance_path;
  report.format = cfg.format;
  report.algorithm = cfg.algorithm;
  report.epsilon = cfg.epsilon;
  report.coreset = cfg.coreset;
  report.grid = cfg.grid;
  report.fair_mode = cfg.fair_mode;
  report.threshold_search = cfg.threshold_search;
  report.seed = cfg.seed;

  divclust::DiversityInstance inst;
  if (cfg.format == "json") {
    inst = divclust::load_instance_json(cfg.instance_path);
  } else if (cfg.format == "csv-points") {
    if (cfg.objective.empty())
      throw divclust::BadParameter("csv-points requires --objective");
    if (cfg.csv_k < 1) throw divclust::BadParameter("csv-points requires --k");
    inst = divclust::load_instance_csv(
        cfg.instance_path, cfg.csv_k, parse_requirements(cfg.csv_requirements),
        divclust::objective_from_string(cfg.objective));
  } else {
    throw divclust::BadParameter("unknown format '" + cfg.format + "'");
  }
  if (!cfg.objective.empty())
    inst.objective = divclust::objective_from_string(cfg.objective);
  report.objective = divclust::to_string(inst.objective);

  divclust::DriverOptions opt;
  opt.epsilon = cfg.epsilon;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  report.threads = divclust::detail::resolve_threads(cfg.threads);
  if (cfg.coreset == "on")
    opt.coreset = divclust::CoresetPolicy::on;
  else if (cfg.coreset == "off")
    opt.coreset = divclust::CoresetPolicy::off;
  else if (cfg.coreset == "auto")
    opt.coreset = divclust::CoresetPolicy::automatic;
  else
    throw divclust::BadParameter("--coreset expects on|off|auto");
  if (cfg.grid == "exact")
    opt.grid = divclust::GridKind::exact;
  else if (cfg.grid == "geometric")
    opt.grid = divclust::GridKind::geometric;
  else
    throw divclust::BadParameter("--grid expects geometric|exact");
  if (cfg.fair_mode == "paper-epsilon")
    opt.copy_mode = divclust::CopyMode::paper_epsilon;
  else if (cfg.fair_mode == "zero-copy")
    opt.copy_mode = divclust::CopyMode::zero;
  else
    throw divclust::BadParameter("--fair-mode expects zero-copy|paper-epsilon");
  if (cfg.threshold_search == "binary")
    opt.threshold_search = divclust::ThresholdSearch::binary;
  else if (cfg.threshold_search == "linear")
    opt.threshold_search = divclust::ThresholdSearch::linear;
  else if (cfg.threshold_search == "checked")
    opt.threshold_search = divclust::ThresholdSearch::checked;
  else
    throw divclust::BadParameter("--threshold-search expects binary|linear|checked");
  if (cfg.inner == "exhaustive")
    opt.inner = divclust::InnerMax::exhaustive;
  else if (cfg.inner == "greedy")
    opt.inner = divclust::InnerMax::lazy_greedy;
  else
    throw divclust::BadParameter("--inner expects greedy|exhaustive");

  divclust::DriverStats stats;
  std::optional<divclust::Solution> solution;
  std::string status = "ok";
  auto t_solve = Clock::now();
  try {
    if (cfg.algorithm == "exact") {
      auto best = divclust::brute_force_div(inst, oracle_cap_from_env());
      if (!best) throw divclust::InfeasibleError("no feasible k-subset");
      solution = *best;
    } else if (cfg.algorithm == "fpt-submodular" ||
               cfg.algorithm == "fpt-warmup") {
      if (inst.objective == divclust::Objective::supplier)
        throw divclust::BadParameter(
            "use --algorithm supplier-matching for the supplier objective");
      opt.pick = cfg.algorithm == "fpt-warmup" ? divclust::PickMode::warmup
                                               : divclust::PickMode::submodular;
      solution = divclust::solve_div_clustering(inst, opt, &stats);
    } else if (cfg.algorithm == "supplier-matching") {
      if (inst.objective != divclust::Objective::supplier)
        throw divclust::BadParameter(
            "--algorithm supplier-matching requires the supplier objective");
      solution = divclust::solve_div_clustering(inst, opt, &stats);
    } else if (cfg.algorithm == "fair") {
      solution = divclust::solve_fair(inst, opt, &stats);
    } else {
      throw divclust::BadParameter("unknown algorithm '" + cfg.algorithm + "'");
    }
  } catch (const divclust::InfeasibleError&) {
    status = "infeasible";
  }
  report.time_solve_ms = ms_since(t_solve);
  report.status = status;
  report.patterns_enumerated = stats.patterns_enumerated;
  report.patterns_feasible = stats.patterns_feasible;
  report.guesses_examined = stats.guesses_examined;
  report.thresholds_examined = stats.thresholds_examined;
  report.coreset_size = stats.coreset_size;
  report.coreset_active = stats.coreset_active;
  report.search_anomaly = stats.search_anomaly;

  if (solution) {
    report.solution = solution->facilities;
    report.cost = solution->cost;
    report.feasible = solution->feasible;
    for (int i = 0; i < inst.group_count(); ++i) {
      int hit = 0;
      for (int f : inst.groups[i])
        if (std::binary_search(solution->facilities.begin(),
                               solution->facilities.end(), f))
          ++hit;
      report.certificate.push_back("g" + std::to_string(i) + ":" +
                                   std::to_string(hit) + "/" +
                                   std::to_string(inst.requirements[i]));
    }
  }

  if (cfg.run_exact && cfg.algorithm != "exact" && status == "ok") {
    auto t_oracle = Clock::now();
    auto best = divclust::brute_force_div(inst, oracle_cap_from_env());
    report.time_oracle_ms = ms_since(t_oracle);
    if (best) {
      report.have_opt = true;
      report.opt_cost = best->cost;
    }
  }

  report.time_total_ms = ms_since(t_start);
  std::string text = divclust::render_report(report);
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw divclust::Error(divclust::ExitCode::failure,
                                    "cannot write '" + cfg.out_path + "'");
    out << text;
  }
  return status == "infeasible"
             ? static_cast<int>(divclust::ExitCode::infeasible)
             : 0;
}

struct GenerateConfig {
  std::string kind = "euclidean-random";
  std::uint64_t seed = 0;
  std::string out_path;
  std::string objective = "median";
  // euclidean-random
  int n_clients = 10, n_facilities = 10, dim = 2, t = 2, k = 2,
      max_requirement = 1;
  bool shared_points = false;
  double membership_prob = 0.5;
  // planted-groups
  int clusters = 3, facilities_per_cluster = 3, clients_per_cluster = 4;
  double spread = 0.05, overlap_prob = 0.1;
  // vertex-cover-hard
  int vertices = 6;
  double edge_prob = 0.5;
};

int run_generate(const GenerateConfig& cfg) {
  divclust::DiversityInstance inst;
  divclust::Objective objective =
      divclust::objective_from_string(cfg.objective);
  if (cfg.kind == "euclidean-random") {
    divclust::EuclideanRandomParams p;
    p.n_clients = cfg.n_clients;
    p.n_facilities = cfg.n_facilities;
    p.shared_points = cfg.shared_points;
    p.dim = cfg.dim;
    p.t = cfg.t;
    p.membership_prob = cfg.membership_prob;
    p.k = cfg.k;
    p.max_requirement = cfg.max_requirement;
    p.objective = objective;
    inst = divclust::generate_euclidean_random(p, cfg.seed);
  } else if (cfg.kind == "planted-groups") {
    divclust::PlantedGroupsParams p;
    p.clusters = cfg.clusters;
    p.facilities_per_cluster = cfg.facilities_per_cluster;
    p.clients_per_cluster = cfg.clients_per_cluster;
    p.spread = cfg.spread;
    p.dim = cfg.dim;
    p.t = cfg.t;
    p.overlap_prob = cfg.overlap_prob;
    p.k = cfg.k;
    p.objective = objective;
    inst = divclust::generate_planted_groups(p, cfg.seed);
  } else if (cfg.kind == "vertex-cover-hard") {
    divclust::VertexCoverParams p;
    p.n_vertices = cfg.vertices;
    p.edge_prob = cfg.edge_prob;
    p.k = cfg.k;
    p.objective = objective;
    inst = divclust::generate_vertex_cover_hard(p, cfg.seed);
  } else {
    throw divclust::BadParameter("unknown generator kind '" + cfg.kind + "'");
  }
  nlohmann::json j = divclust::instance_to_json(inst);
  if (cfg.out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw divclust::Error(divclust::ExitCode::failure,
                                    "cannot write '" + cfg.out_path + "'");
    out << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divclust: diversity-aware clustering solver"};
  app.require_subcommand(1);

  SolveConfig solve_cfg;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--instance", solve_cfg.instance_path, "instance file")
      ->required();
  solve->add_option("--format", solve_cfg.format, "json|csv-points");
  solve->add_option("--objective", solve_cfg.objective,
                    "median|means|supplier (overrides the instance)");
  solve->add_option("--algorithm", solve_cfg.algorithm,
                    "fpt-submodular|fpt-warmup|supplier-matching|fair|exact");
  solve->add_option("--epsilon", solve_cfg.epsilon, "approximation slack");
  solve->add_flag("--exact", solve_cfg.run_exact,
                  "also run the exhaustive oracle and report the ratio");
  solve->add_option("--coreset", solve_cfg.coreset, "on|off|auto");
  solve->add_option("--grid", solve_cfg.grid, "geometric|exact");
  solve->add_option("--fair-mode", solve_cfg.fair_mode,
                    "zero-copy|paper-epsilon");
  solve->add_option("--threshold-search", solve_cfg.threshold_search,
                    "binary|linear|checked");
  solve->add_option("--inner", solve_cfg.inner,
                    "greedy|exhaustive transversal maximization");
  solve->add_option("--seed", solve_cfg.seed, "rng seed");
  solve->add_option("--threads", solve_cfg.threads,
                    "worker count (0 = hardware)");
  solve->add_option("--out", solve_cfg.out_path, "report path (default stdout)");
  solve->add_option("--k", solve_cfg.csv_k, "solution size (csv-points only)");
  solve->add_option("--requirements", solve_cfg.csv_requirements,
                    "tag=count,... (csv-points only)");

  GenerateConfig gen_cfg;
  CLI::App* gen = app.add_subcommand("generate", "emit a random instance");
  gen->add_option("--kind", gen_cfg.kind,
                  "euclidean-random|planted-groups|vertex-cover-hard");
  gen->add_option("--seed", gen_cfg.seed, "rng seed");
  gen->add_option("--out", gen_cfg.out_path, "output path (default stdout)");
  gen->add_option("--objective", gen_cfg.objective, "median|means|supplier");
  gen->add_option("--n-clients", gen_cfg.n_clients, "client count");
  gen->add_option("--n-facilities", gen_cfg.n_facilities, "facility count");
  gen->add_flag("--shared-points", gen_cfg.shared_points,
                "clients and facilities share the point set");
  gen->add_option("--dim", gen_cfg.dim, "coordinate dimension");
  gen->add_option("--t", gen_cfg.t, "group count");
  gen->add_option("--membership-prob", gen_cfg.membership_prob,
                  "facility-group membership probability");
  gen->add_option("--k", gen_cfg.k, "solution size");
  gen->add_option("--max-requirement", gen_cfg.max_requirement,
                  "upper bound for random requirements");
  gen->add_option("--clusters", gen_cfg.clusters, "planted cluster count");
  gen->add_option("--facilities-per-cluster", gen_cfg.facilities_per_cluster,
                  "facilities per planted cluster");
  gen->add_option("--clients-per-cluster", gen_cfg.clients_per_cluster,
                  "clients per planted cluster");
  gen->add_option("--spread", gen_cfg.spread, "cluster spread");
  gen->add_option("--overlap-prob", gen_cfg.overlap_prob,
                  "cross-cluster group overlap probability");
  gen->add_option("--vertices", gen_cfg.vertices, "vertex-cover graph size");
  gen->add_option("--edge-prob", gen_cfg.edge_prob,
                  "vertex-cover edge probability");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return run_solve(solve_cfg);
    if (gen->parsed()) return run_generate(gen_cfg);
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(divclust::ExitCode::parse);
  } catch (const divclust::Error& e) {
    std::cerr << "divclust: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "divclust: " << e.what() << "\n";
    return static_cast<int>(divclust::ExitCode::failure);
  }
}

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

#include <sys/wait.h>

#include <catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "testutil.hpp"

using namespace divclust;
using namespace divclust::testutil;

namespace {

std::string source_path(const std::string& rel) {
  return std::string(DIVCLUST_SOURCE_DIR) + "/" + rel;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out);
  out << text;
}

struct CliRun {
  int exit_code;
  std::string output;
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
  std::string out_path = "/tmp/divclust_cli_out.txt";
  std::string cmd = env + " " + std::string(DIVCLUST_CLI_PATH) + " " + args +
                    " > " + out_path + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  CliRun run;
  run.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  run.output = buf.str();
  return run;
}

}  // namespace

TEST_CASE("the canonical sample round-trips") {
  DiversityInstance inst = load_instance_json(source_path("samples/e1.json"));
  CHECK(inst.k == 2);
  CHECK(inst.group_count() == 2);
  CHECK(inst.objective == Objective::median);
  CHECK(inst.d().size() == 5);
  CHECK(inst.d()(0, 4) == 4.0);

  nlohmann::json j = instance_to_json(inst);
  DiversityInstance back = instance_from_json(j);
  CHECK(back.k == inst.k);
  CHECK(back.groups == inst.groups);
  CHECK(back.requirements == inst.requirements);
  for (int u = 0; u < 5; ++u)
    for (int v = 0; v < 5; ++v) CHECK(back.d()(u, v) == inst.d()(u, v));
}

TEST_CASE("schema errors name the offending field") {
  auto parse = [](const char* text) {
    return instance_from_json(nlohmann::json::parse(text));
  };
  try {
    parse(R"({"objective":"median","k":2})");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "clients");
  }
  try {
    parse(R"({"objective":"median","k":2,
              "distances":[[0,1],[1,0]],"clients":[0],"facilities":[0,1],
              "groups":[[0]],"requirements":[1,2]})");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "requirements");
  }
}

TEST_CASE("asymmetric matrices are rejected with a witness") {
  try {
    instance_from_json(nlohmann::json::parse(
        R"({"objective":"median","k":1,
            "distances":[[0,1],[2,0]],"clients":[0],"facilities":[1],
            "groups":[[1]],"requirements":[1]})"));
    FAIL("expected MetricViolation");
  } catch (const MetricViolation& e) {
    CHECK(e.u() == 0);
    CHECK(e.v() == 1);
  }
}

TEST_CASE("csv points load with duplicate detection") {
  std::string csv_path = "/tmp/divclust_test_points.csv";
  spit(csv_path,
       "id,x1,is_client,is_facility,groups\n"
       "0,0.0,1,1,a\n"
       "1,1.0,1,1,a\n"
       "2,2.0,1,1,\n"
       "3,3.0,1,1,b\n"
       "4,4.0,1,1,b\n");
  DiversityInstance inst = load_instance_csv(
      csv_path, 2, {{"a", 1}, {"b", 1}}, Objective::median);
  CHECK(inst.group_count() == 2);
  CHECK(inst.groups[0] == std::vector<int>{0, 1});
  CHECK(inst.requirements == std::vector<int>{1, 1});
  auto best = brute_force_div(inst);
  CHECK(best->cost == 3.0);

  spit(csv_path,
       "id,x1,is_client,is_facility,groups\n"
       "0,0.0,1,1,a\n"
       "0,1.0,1,1,a\n");
  CHECK_THROWS_AS(
      load_instance_csv(csv_path, 1, {{"a", 1}}, Objective::median),
      SchemaError);
}

TEST_CASE("report rendering is schema-stable") {
  Report r;
  r.instance_label = "samples/e1.json";
  r.objective = "supplier";
  r.algorithm = "supplier-matching";
  r.solution = {0, 3};
  r.cost = 1.0;
  r.feasible = true;
  r.certificate = {"g0:1/1", "g1:1/1"};
  r.patterns_enumerated = 6;
  r.patterns_feasible = 1;
  r.thresholds_examined = 5;
  r.have_opt = true;
  r.opt_cost = 1.0;
  r.time_total_ms = 123.0;
  std::string text = render_report(r);
  std::string canon = canonicalize_report(text);
  CHECK(canon.find("time_") == std::string::npos);
  CHECK(text.find("time_total_ms: 123") != std::string::npos);
  CHECK(canon.find("solution: 0 3\n") != std::string::npos);
  CHECK(canon.find("ratio: 1\n") != std::string::npos);
}

TEST_CASE("cli golden report for the sample instance") {
  CliRun run = run_cli("solve --instance " + source_path("samples/e1.json") +
                       " --objective supplier --algorithm supplier-matching"
                       " --exact --threads 1");
  REQUIRE(run.exit_code == 0);
  std::string canon = canonicalize_report(run.output);
  // Strip the machine-dependent instance path line.
  std::string expected = slurp(source_path("tests/golden/e1_supplier.txt"));
  auto strip_instance = [](const std::string& s) {
    std::istringstream in(s);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("instance: ", 0) != 0) out << line << "\n";
    return out.str();
  };
  CHECK(strip_instance(canon) == strip_instance(expected));
}

TEST_CASE("cli exit codes") {
  std::string bad_json = "/tmp/divclust_bad.json";
  spit(bad_json, "{ not json");
  CHECK(run_cli("solve --instance " + bad_json).exit_code == 2);

  std::string infeasible = "/tmp/divclust_infeasible.json";
  spit(infeasible, R"({"objective":"median","k":2,
      "coordinates":[[0],[1],[2],[3],[4]],
      "clients":[0,1,2,3,4],"facilities":[0,1,2,3,4],
      "groups":[[0,1],[3,4]],"requirements":[2,2]})");
  CliRun run = run_cli("solve --instance " + infeasible);
  CHECK(run.exit_code == 3);
  CHECK(run.output.find("status: infeasible") != std::string::npos);

  CliRun capped = run_cli("solve --instance " + source_path("samples/e1.json") +
                              " --algorithm exact",
                          "DIVCLUST_CAP=2");
  CHECK(capped.exit_code == 4);
}

TEST_CASE("cli determinism across thread counts") {
  std::string args = "solve --instance " + source_path("samples/e1.json") +
                     " --grid exact --seed 9";
  std::string first;
  for (int threads : {1, 4, 8}) {
    CliRun run = run_cli(args + " --threads " + std::to_string(threads));
    REQUIRE(run.exit_code == 0);
    std::string canon = canonicalize_report(run.output);
    // The thread count is echoed; mask it before comparing.
    std::istringstream in(canon);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("threads: ", 0) != 0) out << line << "\n";
    if (first.empty())
      first = out.str();
    else
      CHECK(out.str() == first);
  }
}

TEST_CASE("generator determinism") {
  EuclideanRandomParams p;
  DiversityInstance a = generate_euclidean_random(p, 31337);
  DiversityInstance b = generate_euclidean_random(p, 31337);
  CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());
  DiversityInstance c = generate_euclidean_random(p, 31338);
  CHECK(instance_to_json(a).dump() != instance_to_json(c).dump());
}

TEST_CASE("planted groups degenerate to plain clustering at t=1") {
  PlantedGroupsParams p;
  p.t = 1;
  p.overlap_prob = 0.0;
  DiversityInstance inst = generate_planted_groups(p, 5);
  REQUIRE(inst.group_count() == 1);
  // Every facility lands in the single group.
  CHECK(inst.groups[0].size() == inst.d().facilities().size());
}

TEST_CASE("points outside both client and facility sets are tolerated") {
  auto inst = instance_from_json(nlohmann::json::parse(
      R"({"objective":"median","k":1,
          "coordinates":[[0],[1],[2],[50]],
          "clients":[0,1],"facilities":[2],
          "groups":[[2]],"requirements":[1]})"));
  CHECK(inst.d().size() == 4);
  DriverOptions opt;
  Solution s = solve_div_clustering(inst, opt);
  CHECK(s.facilities == std::vector<int>{2});
  CHECK(s.cost == 3.0);  // clients at 0 and 1 served from 2
}

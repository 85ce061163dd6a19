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

// Acceptance suite: every guarantee the solvers advertise, checked against
// exhaustive oracles at desk scale. One pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "divclust/divclust.hpp"
#include "testutil.hpp"

using namespace divclust;
using namespace divclust::testutil;

namespace {

constexpr double kTol = 1e-9;

struct Harness {
  int failures = 0;

  void run(int id, const std::string& name,
           const std::function<bool(std::string&)>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    std::printf("[%s] %02d %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

struct RatioTracker {
  double worst = 0;
  int violations = 0;
  int count = 0;

  void add(double cost, double opt, double bound) {
    ++count;
    double ratio = opt > 0 ? cost / opt : (cost > 0 ? 1e18 : 1.0);
    worst = std::max(worst, ratio);
    if (cost > bound * opt + kTol) ++violations;
  }

  std::string summary(const char* label) const {
    std::ostringstream out;
    out << count << " instances, worst " << label << " ratio "
        << (count ? worst : 0.0) << ", " << violations << " violations";
    return out.str();
  }
};

// The 500-instance supplier suite feeds criteria 1, 5, and 6; it runs once
// and each criterion reports its own counters.
struct SupplierSuite {
  RatioTracker ratios;
  int infeasible_outputs = 0;
  int cover_faults = 0;       // criterion 6, per accepted threshold
  int saturation_faults = 0;  // criterion 5, at L = OPT
  int instances = 0;
};

const SupplierSuite& supplier_suite() {
  static SupplierSuite s = [] {
    SupplierSuite out;
    Rng rng(20260811);
    for (int trial = 0; trial < 500; ++trial) {
      PartitionInstance p = random_partition_instance(rng, 12, 12, 3);
      ++out.instances;
      Solution opt = brute_force_pm(p);
      SupplierResult r = solve_ksupplier_pm(p);
      out.ratios.add(r.solution.cost, opt.cost, 3.0);
      if (!r.solution.feasible) ++out.infeasible_outputs;

      // Cover properties at the accepted threshold.
      CoverSet cover = build_cover(p, r.threshold);
      if (cover.reps.size() > static_cast<std::size_t>(p.k()))
        ++out.cover_faults;
      for (std::size_t i = 0; i < p.clients.ids.size(); ++i)
        if (p.d()(p.clients.ids[i], cover.rep_of[i]) > 2 * r.threshold + kTol)
          ++out.cover_faults;
      for (std::size_t a = 0; a < cover.reps.size(); ++a)
        for (std::size_t b = a + 1; b < cover.reps.size(); ++b)
          if (p.d()(cover.reps[a], cover.reps[b]) <= 2 * r.threshold)
            ++out.cover_faults;
      for (int c : p.clients.ids)
        if (detail::nearest_distance(p.d(), c, r.solution.facilities) >
            3 * r.threshold + kTol)
          ++out.cover_faults;

      // At L = OPT the cover has <= k reps and the matching saturates them.
      CoverSet opt_cover = build_cover(p, opt.cost);
      MatchGraph g = match_cover(p, opt_cover, opt.cost);
      if (opt_cover.reps.size() > static_cast<std::size_t>(p.k()) ||
          !g.saturated)
        ++out.saturation_faults;
    }
    return out;
  }();
  return s;
}

bool supplier_pm_ratio(std::string& detail) {
  const SupplierSuite& s = supplier_suite();
  detail = s.ratios.summary("supplier") + ", " +
           std::to_string(s.infeasible_outputs) + " infeasible outputs";
  return s.ratios.violations == 0 && s.infeasible_outputs == 0 &&
         s.instances >= 500;
}

bool matching_saturation(std::string& detail) {
  const SupplierSuite& s = supplier_suite();
  detail = std::to_string(s.instances) + " optimal thresholds, " +
           std::to_string(s.saturation_faults) + " saturation faults";
  return s.saturation_faults == 0 && s.instances >= 500;
}

bool cover_properties(std::string& detail) {
  const SupplierSuite& s = supplier_suite();
  detail = std::to_string(s.instances) + " accepted thresholds, " +
           std::to_string(s.cover_faults) + " cover faults";
  return s.cover_faults == 0 && s.instances >= 500;
}

DiversityInstance draw_div_instance(Rng& rng, Objective objective) {
  RandomDivParams params;
  params.min_facilities = 4;
  params.max_facilities = 10;
  params.min_clients = 3;
  params.max_clients = 8;
  params.max_k = 3;
  params.min_t = 2;
  params.max_t = 3;
  params.objective = objective;
  params.require_feasible = true;
  params.require_intersecting = true;
  return random_div_instance(rng, params);
}

bool div_supplier_ratio(std::string& detail) {
  Rng rng(77001);
  RatioTracker ratios;
  for (int trial = 0; trial < 200; ++trial) {
    DiversityInstance inst = draw_div_instance(rng, Objective::supplier);
    auto opt = brute_force_div(inst);
    if (!opt) return false;
    DriverOptions dopt;
    dopt.copy_mode = CopyMode::zero;
    Solution s = solve_div_clustering(inst, dopt);
    if (!s.feasible) {
      detail = "infeasible output at trial " + std::to_string(trial);
      return false;
    }
    ratios.add(s.cost, opt->cost, 3.0);
  }
  detail = ratios.summary("supplier");
  return ratios.violations == 0 && ratios.count >= 200;
}

bool warmup_median_ratio(std::string& detail) {
  Rng rng(77002);
  RatioTracker ratios;
  for (int trial = 0; trial < 200; ++trial) {
    DiversityInstance inst = draw_div_instance(rng, Objective::median);
    auto opt = brute_force_div(inst);
    if (!opt) return false;
    DriverOptions dopt;
    dopt.pick = PickMode::warmup;
    dopt.grid = GridKind::exact;
    dopt.coreset = CoresetPolicy::off;
    Solution s = solve_div_clustering(inst, dopt);
    if (!s.feasible) return false;
    ratios.add(s.cost, opt->cost, 3.0);
  }
  detail = ratios.summary("warmup");
  return ratios.violations == 0 && ratios.count >= 200;
}

bool submodular_ratio(std::string& detail) {
  Rng rng(77003);
  const double median_bound = 1 + 2 / std::exp(1.0);
  const double means_bound = 1 + 8 / std::exp(1.0);
  RatioTracker med, mea;
  double greedy_worst = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    Objective obj = trial % 2 ? Objective::means : Objective::median;
    DiversityInstance inst = draw_div_instance(rng, obj);
    auto opt = brute_force_div(inst);
    if (!opt) return false;
    DriverOptions dopt;
    dopt.grid = GridKind::exact;
    dopt.coreset = CoresetPolicy::off;
    dopt.inner = InnerMax::exhaustive;
    Solution s = solve_div_clustering(inst, dopt);
    if (!s.feasible) return false;
    (obj == Objective::means ? mea : med)
        .add(s.cost, opt->cost, obj == Objective::means ? means_bound
                                                        : median_bound);
    // Lazy-greedy inner maximization: informational, no hard gate.
    dopt.inner = InnerMax::lazy_greedy;
    Solution g = solve_div_clustering(inst, dopt);
    if (opt->cost > 0) greedy_worst = std::max(greedy_worst, g.cost / opt->cost);
  }
  std::ostringstream out;
  out << med.summary("median") << "; " << mea.summary("means")
      << "; greedy worst ratio " << greedy_worst << " (informational)";
  detail = out.str();
  return med.violations == 0 && mea.violations == 0 &&
         med.count + mea.count >= 200;
}

bool pattern_bijection(std::string& detail) {
  Rng rng(77004);
  int mismatches = 0, instances = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RandomDivParams params;
    params.min_facilities = 3;
    params.max_facilities = 8;
    params.require_feasible = false;
    DiversityInstance inst = random_div_instance(rng, params);
    ++instances;

    std::set<std::vector<int>> direct;
    std::vector<int> fac = inst.d().facilities();
    std::sort(fac.begin(), fac.end());
    int n = static_cast<int>(fac.size());
    std::vector<int> idx(inst.k);
    for (int i = 0; i < inst.k; ++i) idx[i] = i;
    while (true) {
      std::vector<int> subset;
      for (int i : idx) subset.push_back(fac[i]);
      if (check_div_r_sat(inst, subset)) direct.insert(subset);
      int pos = inst.k - 1;
      while (pos >= 0 && idx[pos] == n - inst.k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < inst.k; ++i) idx[i] = idx[i - 1] + 1;
    }

    std::set<std::vector<int>> via_patterns;
    FacilityPartition parts = build_partition(inst);
    PatternStream stream(parts, inst.requirements, inst.k);
    while (auto pat = stream.next()) {
      PartitionInstance p =
          materialize(parts, *pat, inst.metric,
                      WeightedClients::all_of(inst.d()), inst.objective);
      std::vector<int> pos_v(p.k(), 0);
      while (true) {
        std::vector<int> originals;
        bool distinct = true;
        for (int j = 0; j < p.k() && distinct; ++j) {
          int orig = p.original_id(p.blocks[j][pos_v[j]]);
          if (std::count(originals.begin(), originals.end(), orig))
            distinct = false;
          else
            originals.push_back(orig);
        }
        if (distinct) {
          std::sort(originals.begin(), originals.end());
          via_patterns.insert(originals);
        }
        int j = p.k() - 1;
        while (j >= 0 && pos_v[j] + 1 == static_cast<int>(p.blocks[j].size())) {
          pos_v[j] = 0;
          --j;
        }
        if (j < 0) break;
        ++pos_v[j];
      }
    }
    if (direct != via_patterns) ++mismatches;
  }
  detail = std::to_string(instances) + " instances, " +
           std::to_string(mismatches) + " mismatches";
  return mismatches == 0 && instances >= 100;
}

bool improve_submodular(std::string& detail) {
  Rng rng(77005);
  int checked = 0, counterexamples = 0;
  while (checked < 50) {
    Objective obj = checked % 2 ? Objective::means : Objective::median;
    PartitionInstance p = random_partition_instance(rng, 7, 6, 3, obj);
    RadiusGrid grid =
        RadiusGrid::exact(p.d(), p.clients.ids, p.metric->facilities());
    LeaderGuess guess;
    bool ok = true;
    for (int j = 0; j < p.k(); ++j) {
      int leader = p.clients.ids[rng.next_int(
          0, static_cast<int>(p.clients.ids.size()) - 1)];
      int f = p.blocks[j][rng.next_int(
          0, static_cast<int>(p.blocks[j].size()) - 1)];
      guess.leaders.push_back(leader);
      guess.radii.push_back(grid.level_for(p.d()(f, leader)));
    }
    CandidateSets cands = candidate_sets(p, grid, guess);
    if (cands.any_empty()) continue;
    std::vector<int> ground;
    for (const auto& pi : cands.pis)
      for (int f : pi) ground.push_back(f);
    if (ground.size() > 8) continue;
    (void)ok;
    ++checked;
    ExtendedMetric ext(p, guess, cands);
    auto fn = [&](std::uint32_t mask) {
      std::vector<int> s;
      for (std::size_t i = 0; i < ground.size(); ++i)
        if (mask & (1u << i)) s.push_back(ground[i]);
      return improve(ext, p.clients, s);
    };
    SubmodularityReport report =
        check_submodular(static_cast<int>(ground.size()), fn);
    if (!report.ok()) ++counterexamples;
  }
  detail = std::to_string(checked) + " extended metrics, " +
           std::to_string(counterexamples) + " counterexamples";
  return counterexamples == 0 && checked >= 50;
}

bool coreset_distortion(std::string& detail) {
  const double nu = 0.2;
  auto d = random_line_metric(2000, 30, 424242);
  std::ostringstream out;
  bool ok = true;
  for (Objective obj : {Objective::median, Objective::means}) {
    WeightedClients c = build_coreset(*d, 2, nu, 0.1, obj, 20260811);
    if (c.pass_through()) return false;
    Rng rng(1234);
    int hits = 0;
    for (int i = 0; i < 100; ++i) {
      int a = d->facilities()[rng.next_int(0, 29)];
      int b = d->facilities()[rng.next_int(0, 29)];
      std::vector<int> s = a == b ? std::vector<int>{a}
                                  : std::vector<int>{a, b};
      double approx = weighted_cost(*d, s, obj, c);
      double exact = cost(*d, s, obj);
      if (approx >= (1 - 1.25 * nu) * exact &&
          approx <= (1 + 1.25 * nu) * exact)
        ++hits;
    }
    out << to_string(obj) << " " << hits << "/100 within 1.25*nu; ";
    if (hits < 95) ok = false;
  }
  detail = out.str() + "|C'| <= " +
           std::to_string(coreset_size_bound(d->size(), 2, nu));
  return ok;
}

bool fair_reduction_fidelity(std::string& detail) {
  Rng rng(77006);
  int faults = 0, instances = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Objective obj = trial % 2 ? Objective::supplier : Objective::median;
    DiversityInstance inst = random_fair_instance(rng, 10, 8, 3, obj);
    ++instances;
    PartitionInstance p =
        reduce_fair_to_pm(inst, 0.5, CopyMode::paper_epsilon);
    if (p.k() != inst.k) ++faults;
    if (p.d().size() > inst.k * inst.d().size()) ++faults;
    // Metric validity of the reduced instance.
    const DistanceMatrix& d = p.d();
    double tol = 1e-9 * std::max(1.0, d.diameter());
    bool metric_ok = true;
    for (int u = 0; u < d.size() && metric_ok; ++u)
      for (int v = 0; v < d.size() && metric_ok; ++v) {
        if (d(u, v) != d(v, u)) metric_ok = false;
        for (int w = 0; w < d.size(); ++w)
          if (d(u, w) > d(u, v) + d(v, w) + tol) {
            metric_ok = false;
            break;
          }
      }
    if (!metric_ok) ++faults;

    // Collapsed solutions carry exactly r_i per group.
    DriverOptions dopt;
    dopt.grid = GridKind::exact;
    dopt.copy_mode = trial % 3 == 0 ? CopyMode::paper_epsilon : CopyMode::zero;
    Solution s = solve_fair(inst, dopt);
    if (!s.feasible) ++faults;
  }
  detail = std::to_string(instances) + " instances, " +
           std::to_string(faults) + " faults";
  return faults == 0 && instances >= 100;
}

bool fair_supplier_ratio(std::string& detail) {
  Rng rng(77007);
  RatioTracker ratios;
  for (int trial = 0; trial < 200; ++trial) {
    DiversityInstance inst =
        random_fair_instance(rng, 10, 8, 3, Objective::supplier);
    auto opt = brute_force_div(inst);
    if (!opt) return false;
    DriverOptions dopt;
    dopt.copy_mode = CopyMode::zero;
    Solution s = solve_fair(inst, dopt);
    if (!s.feasible) return false;
    ratios.add(s.cost, opt->cost, 3.0);
  }
  detail = ratios.summary("fair-supplier");
  return ratios.violations == 0 && ratios.count >= 200;
}

bool determinism(std::string& detail) {
  Rng rng(77008);
  int mismatches = 0, runs = 0;
  for (int trial = 0; trial < 6; ++trial) {
    Objective obj = trial % 2 ? Objective::supplier : Objective::median;
    DiversityInstance inst = draw_div_instance(rng, obj);
    DriverOptions base;
    base.grid = GridKind::exact;
    base.threads = 1;
    Solution ref = solve_div_clustering(inst, base);
    for (int threads : {4, 8}) {
      DriverOptions opt = base;
      opt.threads = threads;
      Solution s = solve_div_clustering(inst, opt);
      ++runs;
      if (s.facilities != ref.facilities || s.cost != ref.cost) ++mismatches;
    }
    // Fair path as well.
    DiversityInstance fair = random_fair_instance(rng, 9, 6, 3, obj);
    Solution fref = solve_fair(fair, base);
    for (int threads : {4, 8}) {
      DriverOptions opt = base;
      opt.threads = threads;
      Solution s = solve_fair(fair, opt);
      ++runs;
      if (s.facilities != fref.facilities || s.cost != fref.cost)
        ++mismatches;
    }
  }
  detail = std::to_string(runs) + " re-runs across thread counts, " +
           std::to_string(mismatches) + " mismatches";
  return mismatches == 0;
}

}  // namespace

int main() {
  Harness h;
  h.run(1, "supplier PM 3-approximation over 500 random instances",
        supplier_pm_ratio);
  h.run(2, "diversity supplier end-to-end 3-approximation", div_supplier_ratio);
  h.run(3, "warm-up median 3-approximation (exact grid)", warmup_median_ratio);
  h.run(4, "submodular median/means ratios (exhaustive inner max)",
        submodular_ratio);
  h.run(5, "matching saturates the cover at the optimal threshold",
        matching_saturation);
  h.run(6, "cover properties at accepted thresholds", cover_properties);
  h.run(7, "pattern-materialization bijection", pattern_bijection);
  h.run(8, "improve is monotone submodular on random extended metrics",
        improve_submodular);
  h.run(9, "coreset distortion on a 2000-client instance", coreset_distortion);
  h.run(10, "fair reduction fidelity", fair_reduction_fidelity);
  h.run(11, "fair supplier 3-approximation", fair_supplier_ratio);
  h.run(12, "thread-count determinism", determinism);
  if (h.failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", h.failures);
  return h.failures;
}

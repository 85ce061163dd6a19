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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "divclust/coreset.hpp"
#include "divclust/errors.hpp"
#include "divclust/instance.hpp"
#include "divclust/median_pm.hpp"
#include "divclust/metric.hpp"
#include "divclust/parallel.hpp"
#include "divclust/pattern.hpp"
#include "divclust/supplier_pm.hpp"

namespace divclust {

enum class CopyMode { zero, paper_epsilon };
enum class CoresetPolicy { off, automatic, on };

// Coresets stay off below this client count unless explicitly requested.
inline constexpr std::size_t kCoresetAutoThreshold = 500;

struct DriverOptions {
  double epsilon = 0.25;
  CopyMode copy_mode = CopyMode::zero;
  CoresetPolicy coreset = CoresetPolicy::automatic;
  GridKind grid = GridKind::geometric;
  PickMode pick = PickMode::submodular;
  InnerMax inner = InnerMax::lazy_greedy;
  ThresholdSearch threshold_search = ThresholdSearch::binary;
  int threads = 0;  // 0 = hardware default
  std::uint64_t seed = 0;
  double coreset_delta = 0.1;
};

struct DriverStats {
  std::uint64_t patterns_enumerated = 0;
  std::uint64_t patterns_feasible = 0;
  std::uint64_t guesses_examined = 0;
  std::uint64_t thresholds_examined = 0;
  bool search_anomaly = false;
  std::size_t coreset_size = 0;
  bool coreset_active = false;
};

namespace detail {

inline int resolve_threads(int t) {
  return t > 0 ? t : default_thread_count();
}

inline WeightedClients driver_clients(const DiversityInstance& inst,
                                      const DriverOptions& opt,
                                      DriverStats* stats) {
  if (inst.objective == Objective::supplier &&
      opt.coreset != CoresetPolicy::on)
    return WeightedClients::all_of(inst.d());
  bool want = opt.coreset == CoresetPolicy::on ||
              (opt.coreset == CoresetPolicy::automatic &&
               inst.d().clients().size() > kCoresetAutoThreshold);
  if (!want) return WeightedClients::all_of(inst.d());
  if (inst.objective == Objective::supplier)
    throw BadParameter("no coreset for the supplier objective");
  WeightedClients c =
      build_coreset(inst.d(), inst.k, opt.epsilon / 16.0, opt.coreset_delta,
                    inst.objective, opt.seed);
  if (stats) {
    stats->coreset_active = !c.pass_through();
    stats->coreset_size = c.ids.size();
  }
  return c;
}

inline double copy_spacing(const DiversityInstance& inst,
                           const DriverOptions& opt) {
  if (opt.copy_mode == CopyMode::zero) return 0.0;
  if (opt.epsilon <= 0)
    throw BadParameter("paper-epsilon copies need a positive epsilon");
  return opt.epsilon / 9.0 * inst.d().min_positive_all();
}

}  // namespace detail

// End-to-end solver for diversity-aware clustering: partition the facilities
// by characteristic vector, stream every feasible k-multiset, materialize it
// as a disjoint-block instance, solve it with the objective's PM solver, and
// keep the cheapest collapsed solution. All ids in the returned solution are
// original facility ids.
inline Solution solve_div_clustering(const DiversityInstance& inst,
                                     const DriverOptions& opt,
                                     DriverStats* stats = nullptr) {
  inst.validate();
  if (inst.objective != Objective::supplier && opt.epsilon <= 0)
    throw BadParameter("epsilon must be positive");
  const int threads = detail::resolve_threads(opt.threads);

  WeightedClients clients = detail::driver_clients(inst, opt, stats);
  double spacing = detail::copy_spacing(inst, opt);

  FacilityPartition partition = build_partition(inst);
  PatternStream stream(partition, inst.requirements, inst.k);
  std::vector<ConstraintPattern> patterns;
  while (auto p = stream.next()) patterns.push_back(std::move(*p));
  if (stats) {
    stats->patterns_enumerated = stream.enumerated();
    stats->patterns_feasible = stream.yielded();
  }
  if (patterns.empty())
    throw InfeasibleError("no k-multiset of facility parts meets the lower bounds");

  struct Best {
    double selection_cost = std::numeric_limits<double>::infinity();
    std::vector<int> ids;
    std::uint64_t guesses = 0;
    std::uint64_t thresholds = 0;
    bool anomaly = false;
  };

  auto solve_pattern = [&](Best& acc, std::size_t pi) {
    PartitionInstance pinst =
        materialize(partition, patterns[pi], inst.metric, clients,
                    inst.objective, spacing);
    std::vector<int> collapsed;
    if (inst.objective == Objective::supplier) {
      SupplierResult r = solve_ksupplier_pm(pinst, opt.threshold_search);
      acc.thresholds += r.thresholds_examined;
      acc.anomaly = acc.anomaly || r.search_anomaly;
      collapsed = collapse_solution(pinst, r.solution.facilities);
    } else {
      MedianPmOptions mopt;
      mopt.pick = opt.pick;
      mopt.inner = opt.inner;
      mopt.grid = opt.grid;
      // Guesses parallelize inside the PM solve; patterns stay sequential.
      mopt.threads = threads;
      MedianPmResult r = solve_kmedian_pm(pinst, opt.epsilon / 4.0, mopt);
      acc.guesses += r.guesses_examined;
      collapsed = collapse_solution(pinst, r.solution.facilities);
    }
    double sel =
        cost(inst.d(), collapsed, inst.objective, clients.ids, clients.weights);
    if (sel < acc.selection_cost ||
        (sel == acc.selection_cost && collapsed < acc.ids)) {
      acc.selection_cost = sel;
      acc.ids = std::move(collapsed);
    }
  };

  Best best;
  if (inst.objective == Objective::supplier) {
    best = parallel_map_reduce<Best>(
        patterns.size(), threads, Best{}, solve_pattern,
        [](Best& a, const Best& b) {
          a.guesses += b.guesses;
          a.thresholds += b.thresholds;
          a.anomaly = a.anomaly || b.anomaly;
          if (b.selection_cost < a.selection_cost ||
              (b.selection_cost == a.selection_cost && !b.ids.empty() &&
               (a.ids.empty() || b.ids < a.ids))) {
            a.selection_cost = b.selection_cost;
            a.ids = b.ids;
          }
        });
  } else {
    for (std::size_t pi = 0; pi < patterns.size(); ++pi)
      solve_pattern(best, pi);
  }
  if (stats) {
    stats->guesses_examined = best.guesses;
    stats->thresholds_examined = best.thresholds;
    stats->search_anomaly = best.anomaly;
  }

  Solution s;
  s.facilities = best.ids;
  s.objective = inst.objective;
  s.cost = cost(inst.d(), s.facilities, inst.objective);
  s.feasible = check_div_r_sat(inst, s.facilities);
  s.provenance = inst.objective == Objective::supplier
                     ? "div-ksupplier"
                     : (opt.pick == PickMode::warmup ? "div-kmedian-warmup"
                                                     : "div-kclustering-fpt");
  return s;
}

namespace detail {

inline void validate_fair(const DiversityInstance& inst) {
  std::vector<int> owner(inst.d().size(), -1);
  for (int i = 0; i < inst.group_count(); ++i)
    for (int f : inst.groups[i]) {
      if (owner[f] != -1) throw NotDisjoint(f, owner[f], i);
      owner[f] = i;
    }
  int sum = 0;
  for (int r : inst.requirements) sum += r;
  if (sum != inst.k) throw RequirementSumMismatch(sum, inst.k);
}

}  // namespace detail

// Reduction from fair clustering (disjoint groups, exactly r_i per group,
// sum r_i = k) to a k-partition-matroid instance: r_i blocks per group, one
// holding the originals and the rest distance-`spacing` copy layers. In
// paper_epsilon mode the spacing is (epsilon/9) * d_min; zero mode keeps
// copies exact so costs are undistorted.
inline PartitionInstance reduce_fair_to_pm(
    const DiversityInstance& inst, double epsilon, CopyMode mode,
    const WeightedClients& clients) {
  inst.validate();
  detail::validate_fair(inst);
  if (mode == CopyMode::paper_epsilon && epsilon <= 0)
    throw BadParameter("epsilon must be positive");

  FacilityPartition parts;
  ConstraintPattern pattern;
  pattern.feasible = true;
  pattern.sum = inst.requirements;
  for (int i = 0; i < inst.group_count(); ++i) {
    if (inst.requirements[i] == 0) continue;
    if (inst.groups[i].empty())
      throw InfeasibleError("group " + std::to_string(i) +
                            " is empty but has a positive requirement");
    GroupMask key(inst.group_count());
    key.set(i);
    std::vector<int> members = inst.groups[i];
    std::sort(members.begin(), members.end());
    int part_id = parts.part_count();
    parts.keys.push_back(key);
    parts.parts.push_back(std::move(members));
    for (int c = 0; c < inst.requirements[i]; ++c)
      pattern.part_ids.push_back(part_id);
  }
  double spacing = mode == CopyMode::zero
                       ? 0.0
                       : epsilon / 9.0 * inst.d().min_positive_all();
  return materialize(parts, pattern, inst.metric, clients, inst.objective,
                     spacing);
}

inline PartitionInstance reduce_fair_to_pm(const DiversityInstance& inst,
                                           double epsilon, CopyMode mode) {
  return reduce_fair_to_pm(inst, epsilon, mode,
                           WeightedClients::all_of(inst.d()));
}

// Fair clustering driver: reduce, dispatch to the PM solver for the
// objective, collapse to original ids. The collapsed solution holds exactly
// r_i facilities of every group.
inline Solution solve_fair(const DiversityInstance& inst,
                           const DriverOptions& opt,
                           DriverStats* stats = nullptr) {
  inst.validate();
  detail::validate_fair(inst);
  for (int i = 0; i < inst.group_count(); ++i)
    if (inst.requirements[i] > static_cast<int>(inst.groups[i].size()))
      throw InfeasibleError("group " + std::to_string(i) + " has " +
                            std::to_string(inst.groups[i].size()) +
                            " facilities but requires " +
                            std::to_string(inst.requirements[i]));
  const int threads = detail::resolve_threads(opt.threads);
  WeightedClients clients = detail::driver_clients(inst, opt, stats);
  PartitionInstance pinst =
      reduce_fair_to_pm(inst, opt.epsilon, opt.copy_mode, clients);
  if (stats) stats->patterns_feasible = 1;

  std::vector<int> collapsed;
  if (inst.objective == Objective::supplier) {
    SupplierResult r = solve_ksupplier_pm(pinst, opt.threshold_search);
    if (stats) {
      stats->thresholds_examined = r.thresholds_examined;
      stats->search_anomaly = r.search_anomaly;
    }
    collapsed = collapse_solution(pinst, r.solution.facilities);
  } else {
    MedianPmOptions mopt;
    mopt.pick = opt.pick;
    mopt.inner = opt.inner;
    mopt.grid = opt.grid;
    mopt.threads = threads;
    MedianPmResult r = solve_kmedian_pm(pinst, opt.epsilon, mopt);
    if (stats) stats->guesses_examined = r.guesses_examined;
    collapsed = collapse_solution(pinst, r.solution.facilities);
  }

  Solution s;
  s.facilities = std::move(collapsed);
  s.objective = inst.objective;
  s.cost = cost(inst.d(), s.facilities, inst.objective);
  s.provenance = "fair-clustering";
  s.feasible = true;
  for (int i = 0; i < inst.group_count(); ++i) {
    int hit = 0;
    for (int f : inst.groups[i])
      if (std::binary_search(s.facilities.begin(), s.facilities.end(), f))
        ++hit;
    if (hit != inst.requirements[i]) s.feasible = false;
  }
  return s;
}

}  // namespace divclust

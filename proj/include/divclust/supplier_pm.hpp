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
#include <cstdio>
#include <limits>
#include <span>
#include <vector>

#include "divclust/errors.hpp"
#include "divclust/instance.hpp"
#include "divclust/matching.hpp"
#include "divclust/metric.hpp"

namespace divclust {

// Sorted distinct candidate values for the optimal supplier radius. The
// optimum is always realized as a client-facility distance, so those
// suffice.
struct ThresholdLadder {
  std::vector<double> values;
};

inline ThresholdLadder build_threshold_ladder(const PartitionInstance& p) {
  ThresholdLadder ladder;
  for (int c : p.clients.ids)
    for (const auto& block : p.blocks)
      for (int f : block) ladder.values.push_back(p.d()(c, f));
  std::sort(ladder.values.begin(), ladder.values.end());
  ladder.values.erase(std::unique(ladder.values.begin(), ladder.values.end()),
                      ladder.values.end());
  return ladder;
}

// Greedy 2L-ball covering: repeatedly promote the lowest-index unmarked
// client to representative and mark its closed 2L-ball. Representatives are
// pairwise more than 2L apart, and every client lies within 2L of its
// representative.
struct CoverSet {
  std::vector<int> reps;    // representative client ids, in pick order
  std::vector<int> rep_of;  // per client position, the representative's id
};

inline CoverSet build_cover(const PartitionInstance& p, double radius) {
  if (radius < 0) throw BadParameter("negative threshold");
  CoverSet cover;
  cover.rep_of.assign(p.clients.ids.size(), -1);
  for (std::size_t i = 0; i < p.clients.ids.size(); ++i) {
    if (cover.rep_of[i] != -1) continue;
    int rep = p.clients.ids[i];
    cover.reps.push_back(rep);
    for (std::size_t j = i; j < p.clients.ids.size(); ++j)
      if (cover.rep_of[j] == -1 && p.d()(rep, p.clients.ids[j]) <= 2 * radius)
        cover.rep_of[j] = rep;
  }
  return cover;
}

// Bipartite graph between representatives and blocks: an edge whenever the
// block has a facility within the closed L-ball of the representative. The
// threshold is accepted iff a matching saturates the representatives.
struct MatchGraph {
  std::vector<std::vector<int>> edges;  // per representative, block ids
  std::vector<int> block_of_rep;        // -1 when unmatched
  std::vector<int> rep_of_block;        // -1 when unmatched
  bool saturated = false;
};

inline MatchGraph match_cover(const PartitionInstance& p,
                              const CoverSet& cover, double radius) {
  MatchGraph g;
  const int m = static_cast<int>(cover.reps.size());
  g.edges.resize(m);
  for (int i = 0; i < m; ++i)
    for (int b = 0; b < p.k(); ++b)
      for (int f : p.blocks[b])
        if (p.d()(cover.reps[i], f) <= radius) {
          g.edges[i].push_back(b);
          break;
        }
  BipartiteMatcher matcher(m, p.k(), g.edges);
  int matched = matcher.solve();
  g.block_of_rep = matcher.left_match();
  g.rep_of_block = matcher.right_match();
  g.saturated = matched == m;
  return g;
}

// Assembles the solution for an accepted threshold: each matched block opens
// the lowest-index facility inside its representative's L-ball, unmatched
// blocks open their lowest-index facility. Every client then sits within 3L
// of the solution.
inline Solution assemble(const PartitionInstance& p, const CoverSet& cover,
                         const MatchGraph& g, double radius) {
  std::vector<int> picks;
  for (int b = 0; b < p.k(); ++b) {
    int chosen = -1;
    if (g.rep_of_block[b] != -1) {
      int rep = cover.reps[g.rep_of_block[b]];
      for (int f : p.blocks[b])
        if (p.d()(rep, f) <= radius && (chosen == -1 || f < chosen)) chosen = f;
    }
    if (chosen == -1) chosen = p.blocks[b].front();
    picks.push_back(chosen);
  }
  Solution s;
  s.objective = Objective::supplier;
  s.provenance = "ksupplier-pm";
  std::sort(picks.begin(), picks.end());
  s.facilities = std::move(picks);
  s.cost = p.clients.ids.empty()
               ? 0.0
               : cost(p.d(), s.facilities, Objective::supplier, p.clients.ids,
                      {});
  s.feasible = check_partition_feasible(p, s.facilities);
  return s;
}

enum class ThresholdSearch { binary, linear, checked };

struct SupplierResult {
  Solution solution;
  double threshold = 0.0;
  std::uint64_t thresholds_examined = 0;
  bool search_anomaly = false;  // binary and linear scans disagreed
};

namespace detail {

inline bool threshold_accepted(const PartitionInstance& p, double radius,
                               CoverSet* cover_out, MatchGraph* graph_out) {
  CoverSet cover = build_cover(p, radius);
  if (static_cast<int>(cover.reps.size()) > p.k()) return false;
  MatchGraph g = match_cover(p, cover, radius);
  if (!g.saturated) return false;
  if (cover_out) *cover_out = std::move(cover);
  if (graph_out) *graph_out = std::move(g);
  return true;
}

}  // namespace detail

// Threshold search + ball covering + matching. Every threshold at or above
// the optimum is accepted, so binary search lands on an accepted value no
// larger than the optimum and the assembled solution costs at most 3x it.
// Acceptance below the optimum is not guaranteed monotone; `checked` mode
// cross-validates binary search against a linear scan and falls back to the
// scan result on disagreement.
inline SupplierResult solve_ksupplier_pm(
    const PartitionInstance& p,
    ThresholdSearch search = ThresholdSearch::binary) {
  p.validate();
  SupplierResult result;

  if (p.clients.ids.empty()) {
    CoverSet cover;
    MatchGraph g;
    g.rep_of_block.assign(p.k(), -1);
    result.solution = assemble(p, cover, g, 0.0);
    return result;
  }

  ThresholdLadder ladder = build_threshold_ladder(p);
  const auto& vals = ladder.values;

  auto accepted = [&](std::size_t idx) {
    ++result.thresholds_examined;
    return detail::threshold_accepted(p, vals[idx], nullptr, nullptr);
  };

  auto run_binary = [&]() -> std::size_t {
    std::size_t lo = 0, hi = vals.size() - 1;
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (accepted(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  };
  auto run_linear = [&]() -> std::size_t {
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (accepted(i)) return i;
    return vals.size() - 1;
  };

  std::size_t found;
  switch (search) {
    case ThresholdSearch::binary:
      found = run_binary();
      break;
    case ThresholdSearch::linear:
      found = run_linear();
      break;
    case ThresholdSearch::checked: {
      std::size_t b = run_binary();
      std::size_t l = run_linear();
      if (b != l) {
        result.search_anomaly = true;
        std::fprintf(stderr,
                     "divclust: threshold acceptance is non-monotone here "
                     "(binary %.17g vs linear %.17g); using linear scan\n",
                     vals[b], vals[l]);
      }
      found = l;
      break;
    }
    default:
      found = run_binary();
  }

  CoverSet cover;
  MatchGraph graph;
  if (!detail::threshold_accepted(p, vals[found], &cover, &graph))
    throw Error(ExitCode::failure, "accepted threshold failed re-validation");
  result.threshold = vals[found];
  result.solution = assemble(p, cover, graph, vals[found]);
  return result;
}

}  // namespace divclust

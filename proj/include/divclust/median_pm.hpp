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
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <vector>

#include "divclust/errors.hpp"
#include "divclust/instance.hpp"
#include "divclust/metric.hpp"
#include "divclust/parallel.hpp"
#include "divclust/pattern.hpp"

namespace divclust {

// One guessed anchor per block: a client (the presumed closest one to the
// optimal facility of that block) and a discretized radius level.
struct LeaderGuess {
  std::vector<int> leaders;   // client ids, one per block
  std::vector<double> radii;  // grid levels, one per block
};

struct CandidateSets {
  std::vector<std::vector<int>> pis;  // per block, sorted facility ids

  bool any_empty() const {
    for (const auto& pi : pis)
      if (pi.empty()) return true;
    return false;
  }
};

namespace detail {

// Per-client contribution under the active objective.
inline double client_term(double dist, Objective o) {
  return o == Objective::means ? dist * dist : dist;
}

// d(F'_j, q) for every point q: 2r inside the candidate set, 2r plus the
// nearest candidate otherwise.
inline double fictitious_distance(const DistanceMatrix& d,
                                  std::span<const int> pi, double radius,
                                  int q) {
  if (std::binary_search(pi.begin(), pi.end(), q)) return 2 * radius;
  double nearest = std::numeric_limits<double>::infinity();
  for (int f : pi) nearest = std::min(nearest, d(f, q));
  return 2 * radius + nearest;
}

}  // namespace detail

// Candidate sets via the radius-bucket rule: a facility belongs to the block's
// set iff its leader distance rounds up to exactly the guessed level. Empty
// sets signal a rejected guess.
inline CandidateSets candidate_sets(const PartitionInstance& p,
                                    const RadiusGrid& grid,
                                    const LeaderGuess& guess) {
  if (static_cast<int>(guess.leaders.size()) != p.k() ||
      guess.radii.size() != guess.leaders.size())
    throw BadParameter("guess dimensions do not match k");
  CandidateSets out;
  out.pis.resize(p.k());
  for (int j = 0; j < p.k(); ++j) {
    for (int f : p.blocks[j])
      if (grid.level_for(p.d()(f, guess.leaders[j])) == guess.radii[j])
        out.pis[j].push_back(f);
    std::sort(out.pis[j].begin(), out.pis[j].end());
  }
  return out;
}

// The metric extended by one fictitious facility per block, pinned at 2r_j
// from the block's candidate set. Distances to everything else follow by
// shortest path, which keeps the extension metric as long as each candidate
// set has diameter at most 2r_j (the bucket rule guarantees it).
class ExtendedMetric {
 public:
  ExtendedMetric(const PartitionInstance& p, LeaderGuess guess,
                 CandidateSets cands)
      : pinst_(&p), guess_(std::move(guess)), cands_(std::move(cands)) {
    for (int j = 0; j < p.k(); ++j)
      if (cands_.pis[j].empty()) throw EmptyCandidate(j);
    fict_.resize(p.k());
    for (int j = 0; j < p.k(); ++j) {
      fict_[j].resize(p.d().size());
      for (int q = 0; q < p.d().size(); ++q)
        fict_[j][q] = detail::fictitious_distance(p.d(), cands_.pis[j],
                                                  guess_.radii[j], q);
    }
  }

  const PartitionInstance& instance() const { return *pinst_; }
  const CandidateSets& candidates() const { return cands_; }
  const LeaderGuess& guess() const { return guess_; }

  double fict_to_point(int j, int q) const { return fict_[j][q]; }

  double fict_to_fict(int i, int j) const {
    if (i == j) return 0.0;
    double nearest = std::numeric_limits<double>::infinity();
    for (int f : cands_.pis[i])
      for (int g : cands_.pis[j])
        nearest = std::min(nearest, pinst_->d()(f, g));
    return 2 * guess_.radii[i] + 2 * guess_.radii[j] + nearest;
  }

  // d(q, F') over all fictitious facilities.
  double base_distance(int q) const {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& row : fict_) b = std::min(b, row[q]);
    return b;
  }

  // cost(C', F') under the instance objective.
  double base_cost(const WeightedClients& c) const {
    double total = 0;
    for (std::size_t i = 0; i < c.ids.size(); ++i)
      total += c.weights[i] * detail::client_term(base_distance(c.ids[i]),
                                                  pinst_->objective);
    return total;
  }

  // cost(C', F' u S).
  double joint_cost(const WeightedClients& c, std::span<const int> s) const {
    double total = 0;
    for (std::size_t i = 0; i < c.ids.size(); ++i) {
      double m = base_distance(c.ids[i]);
      for (int f : s) m = std::min(m, pinst_->d()(c.ids[i], f));
      total += c.weights[i] * detail::client_term(m, pinst_->objective);
    }
    return total;
  }

 private:
  const PartitionInstance* pinst_;
  LeaderGuess guess_;
  CandidateSets cands_;
  std::vector<std::vector<double>> fict_;
};

// improve(S) = cost(C', F') - cost(C', F' u S). Monotone and submodular:
// per client it is the best single-facility gain over S.
inline double improve(const ExtendedMetric& ext, const WeightedClients& c,
                      std::span<const int> s) {
  return ext.base_cost(c) - ext.joint_cost(c, s);
}

namespace detail {

// Shared per-guess state: base distances (to the fictitious set) per client,
// plus candidate sets. Aggregation and greedy work on top of it.
struct GuessEval {
  const DistanceMatrix* d;
  const WeightedClients* clients;
  Objective objective;
  const std::vector<std::vector<int>>* pis;
  std::vector<double> base;  // per client position
};

inline double eval_total(const GuessEval& g, const std::vector<double>& cur) {
  double total = 0;
  for (std::size_t i = 0; i < cur.size(); ++i)
    total += g.clients->weights[i] * client_term(cur[i], g.objective);
  return total;
}

// Exhaustive inner maximization: the transversal minimizing
// cost(C', F' u S), i.e. the exact improve maximizer. First-found argmin in
// block-major, ascending-facility order keeps ties deterministic.
inline std::vector<int> exhaustive_transversal(const GuessEval& g) {
  const int k = static_cast<int>(g.pis->size());
  std::vector<std::vector<double>> stack(k + 1);
  stack[0] = g.base;
  std::vector<int> pick(k, -1), best;
  double best_total = std::numeric_limits<double>::infinity();
  std::vector<int> pos(k, 0);
  int depth = 0;
  while (depth >= 0) {
    if (depth == k) {
      double total = eval_total(g, stack[k]);
      if (total < best_total) {
        best_total = total;
        best = pick;
      }
      --depth;
      continue;
    }
    const auto& pi = (*g.pis)[depth];
    if (pos[depth] == static_cast<int>(pi.size())) {
      pos[depth] = 0;
      --depth;
      continue;
    }
    int f = pi[pos[depth]++];
    pick[depth] = f;
    stack[depth + 1] = stack[depth];
    for (std::size_t i = 0; i < stack[depth + 1].size(); ++i)
      stack[depth + 1][i] =
          std::min(stack[depth + 1][i], (*g.d)(g.clients->ids[i], f));
    ++depth;
  }
  return best;
}

inline double marginal_gain(const GuessEval& g, const std::vector<double>& cur,
                            int f) {
  double gain = 0;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    double nd = (*g.d)(g.clients->ids[i], f);
    if (nd < cur[i])
      gain += g.clients->weights[i] *
              (client_term(cur[i], g.objective) - client_term(nd, g.objective));
  }
  return gain;
}

// Lazy greedy over the partition matroid: k rounds, each taking the best
// (block, facility) marginal among uncovered blocks. Stale heap entries are
// refreshed on pop; monotonicity makes cached gains upper bounds, so the
// first fresh pop is the true maximum.
inline std::vector<int> lazy_greedy_transversal(const GuessEval& g) {
  const int k = static_cast<int>(g.pis->size());
  struct Entry {
    double gain;
    int round;
    int block;
    int fidx;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    if (a.block != b.block) return a.block > b.block;
    return a.fidx > b.fidx;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  std::vector<double> cur = g.base;
  for (int j = 0; j < k; ++j)
    for (std::size_t fi = 0; fi < (*g.pis)[j].size(); ++fi)
      heap.push({marginal_gain(g, cur, (*g.pis)[j][fi]), 0,
                 j, static_cast<int>(fi)});
  std::vector<int> pick(k, -1);
  int round = 0;
  while (round < k) {
    Entry top = heap.top();
    heap.pop();
    if (pick[top.block] != -1) continue;
    if (top.round != round) {
      top.gain = marginal_gain(g, cur, (*g.pis)[top.block][top.fidx]);
      top.round = round;
      heap.push(top);
      continue;
    }
    int f = (*g.pis)[top.block][top.fidx];
    pick[top.block] = f;
    for (std::size_t i = 0; i < cur.size(); ++i)
      cur[i] = std::min(cur[i], (*g.d)(g.clients->ids[i], f));
    ++round;
  }
  return pick;
}

}  // namespace detail

// Exactly one facility per candidate set, chosen by lazy greedy on improve.
inline std::vector<int> greedy_matroid_max(const ExtendedMetric& ext,
                                           const WeightedClients& clients) {
  const CandidateSets& cands = ext.candidates();
  for (std::size_t j = 0; j < cands.pis.size(); ++j)
    if (cands.pis[j].empty()) throw EmptyCandidate(static_cast<int>(j));
  detail::GuessEval g{&ext.instance().d(), &clients,
                      ext.instance().objective, &cands.pis, {}};
  g.base.resize(clients.ids.size());
  for (std::size_t i = 0; i < clients.ids.size(); ++i)
    g.base[i] = ext.base_distance(clients.ids[i]);
  return detail::lazy_greedy_transversal(g);
}

// The exact improve maximizer over all transversals.
inline std::vector<int> exhaustive_matroid_max(const ExtendedMetric& ext,
                                               const WeightedClients& clients) {
  const CandidateSets& cands = ext.candidates();
  for (std::size_t j = 0; j < cands.pis.size(); ++j)
    if (cands.pis[j].empty()) throw EmptyCandidate(static_cast<int>(j));
  detail::GuessEval g{&ext.instance().d(), &clients,
                      ext.instance().objective, &cands.pis, {}};
  g.base.resize(clients.ids.size());
  for (std::size_t i = 0; i < clients.ids.size(); ++i)
    g.base[i] = ext.base_distance(clients.ids[i]);
  return detail::exhaustive_transversal(g);
}

enum class PickMode { warmup, submodular };
enum class InnerMax { lazy_greedy, exhaustive };
enum class GridKind { geometric, exact };

struct MedianPmOptions {
  PickMode pick = PickMode::submodular;
  InnerMax inner = InnerMax::lazy_greedy;
  GridKind grid = GridKind::geometric;
  int threads = 1;
};

struct MedianPmResult {
  Solution solution;  // ids in the instance's (possibly extended) universe
  std::uint64_t guesses_examined = 0;
};

namespace detail {

// One (leader, level) choice for a block, with the per-client fictitious
// distances precomputed once.
struct BlockOption {
  int leader;
  double radius;
  std::vector<int> pi;
  std::vector<double> fict;  // per coreset-client position
};

inline std::vector<BlockOption> block_options(const PartitionInstance& p,
                                              int block,
                                              const RadiusGrid& grid) {
  std::vector<BlockOption> out;
  for (int leader : p.clients.ids) {
    std::map<double, std::vector<int>> buckets;
    for (int f : p.blocks[block])
      buckets[grid.level_for(p.d()(f, leader))].push_back(f);
    for (auto& [radius, pi] : buckets) {
      std::sort(pi.begin(), pi.end());
      BlockOption opt;
      opt.leader = leader;
      opt.radius = radius;
      opt.fict.resize(p.clients.ids.size());
      for (std::size_t i = 0; i < p.clients.ids.size(); ++i)
        opt.fict[i] =
            fictitious_distance(p.d(), pi, radius, p.clients.ids[i]);
      opt.pi = std::move(pi);
      out.push_back(std::move(opt));
    }
  }
  return out;
}

}  // namespace detail

// Leader-radius enumeration for k-median / k-means under a k-partition
// matroid. Iterates every (leader, level) tuple with non-empty candidate
// sets, picks a transversal per guess (arbitrary lowest-index in warmup mode,
// improve maximization otherwise), and keeps the transversal of minimum real
// cost against the instance's weighted clients.
inline MedianPmResult solve_kmedian_pm(const PartitionInstance& p,
                                       double epsilon,
                                       const MedianPmOptions& opt = {}) {
  p.validate();
  if (epsilon <= 0) throw BadParameter("epsilon must be positive");
  if (p.objective == Objective::supplier)
    throw BadParameter("supplier objective has a dedicated solver");
  const int k = p.k();
  const WeightedClients& clients = p.clients;

  MedianPmResult result;
  result.solution.objective = p.objective;
  result.solution.provenance =
      opt.pick == PickMode::warmup ? "kmedian-pm-warmup" : "kmedian-pm";

  auto finalize = [&](std::vector<int> ids, double c) {
    std::sort(ids.begin(), ids.end());
    result.solution.facilities = std::move(ids);
    result.solution.cost = c;
    result.solution.feasible =
        check_partition_feasible(p, result.solution.facilities);
  };

  if (clients.ids.empty()) {
    std::vector<int> picks;
    for (const auto& block : p.blocks) picks.push_back(block.front());
    finalize(std::move(picks), 0.0);
    return result;
  }

  RadiusGrid grid;
  if (opt.grid == GridKind::exact) {
    std::vector<int> facility_union;
    for (const auto& block : p.blocks)
      facility_union.insert(facility_union.end(), block.begin(), block.end());
    grid = RadiusGrid::exact(p.d(), clients.ids, facility_union);
  } else {
    double eta = p.objective == Objective::means
                     ? std::exp(1.0) * epsilon / 16.0
                     : std::exp(1.0) * epsilon / 2.0;
    try {
      grid = RadiusGrid::geometric(p.d(), eta);
    } catch (const DegenerateMetric&) {
      grid.eta = eta;
      grid.levels = {0.0};
    }
  }

  std::vector<std::vector<detail::BlockOption>> options(k);
  std::vector<std::uint64_t> dims(k);
  double space = 1;
  for (int j = 0; j < k; ++j) {
    options[j] = detail::block_options(p, j, grid);
    dims[j] = options[j].size();
    space *= static_cast<double>(dims[j]);
  }
  if (space > 1e15)
    throw CapExceeded("guess space of " + std::to_string(space) + " tuples");
  std::uint64_t total = 1;
  for (int j = 0; j < k; ++j) total *= dims[j];

  struct Best {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<int> ids;
    std::uint64_t examined = 0;
  };

  auto evaluate = [&](Best& acc, std::size_t linear) {
    std::vector<int> digit(k);
    std::uint64_t x = linear;
    for (int j = k - 1; j >= 0; --j) {
      digit[j] = static_cast<int>(x % dims[j]);
      x /= dims[j];
    }
    // Identical copy blocks are interchangeable; keep one canonical order.
    for (int j = 1; j < k; ++j)
      if (p.blocks_equivalent(j - 1, j) && digit[j] < digit[j - 1]) return;
    ++acc.examined;

    detail::GuessEval g{&p.d(), &clients, p.objective, nullptr, {}};
    std::vector<std::vector<int>> pis(k);
    g.base.assign(clients.ids.size(),
                  std::numeric_limits<double>::infinity());
    for (int j = 0; j < k; ++j) {
      const detail::BlockOption& o = options[j][digit[j]];
      pis[j] = o.pi;
      for (std::size_t i = 0; i < g.base.size(); ++i)
        g.base[i] = std::min(g.base[i], o.fict[i]);
    }
    g.pis = &pis;

    std::vector<int> picks;
    if (opt.pick == PickMode::warmup) {
      for (int j = 0; j < k; ++j) picks.push_back(pis[j].front());
    } else if (opt.inner == InnerMax::exhaustive) {
      picks = detail::exhaustive_transversal(g);
    } else {
      picks = detail::lazy_greedy_transversal(g);
    }
    double real = weighted_cost(p.d(), picks, p.objective, clients);
    std::sort(picks.begin(), picks.end());
    if (real < acc.cost || (real == acc.cost && picks < acc.ids)) {
      acc.cost = real;
      acc.ids = std::move(picks);
    }
  };

  Best best = parallel_map_reduce<Best>(
      total, opt.threads, Best{}, evaluate, [](Best& a, const Best& b) {
        a.examined += b.examined;
        if (b.cost < a.cost || (b.cost == a.cost && !b.ids.empty() &&
                                (a.ids.empty() || b.ids < a.ids)))
          a.cost = b.cost, a.ids = b.ids;
      });

  result.guesses_examined = best.examined;
  if (best.ids.empty()) throw EmptyBlock(0);
  finalize(std::move(best.ids), best.cost);
  return result;
}

}  // namespace divclust

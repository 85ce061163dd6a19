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
#include <map>
#include <span>
#include <vector>

#include "divclust/errors.hpp"
#include "divclust/metric.hpp"
#include "divclust/rng.hpp"

namespace divclust {

// Weighted client set C'. A pass-through coreset (all clients, unit weights,
// nu = 0) is byte-identical to using no coreset at all.
struct WeightedClients {
  std::vector<int> ids;
  std::vector<double> weights;
  double nu = 0.0;
  double delta = 0.0;

  bool pass_through() const { return nu == 0.0; }
  double total_weight() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }

  static WeightedClients all_of(const DistanceMatrix& d) {
    WeightedClients w;
    w.ids = d.clients();
    w.weights.assign(w.ids.size(), 1.0);
    return w;
  }
};

inline double weighted_cost(const DistanceMatrix& d, std::span<const int> s,
                            Objective objective, const WeightedClients& c) {
  return cost(d, s, objective, c.ids, c.weights);
}

// Size bound |C'| <= ceil(Gamma * k * log|U|) with Gamma = 2 / nu^2.
inline std::size_t coreset_size_bound(int universe, int k, double nu) {
  double gamma = 2.0 / (nu * nu);
  return static_cast<std::size_t>(
      std::ceil(gamma * k * std::log(std::max(2, universe))));
}

// Sensitivity-sampling coreset for the median/means objectives: a greedy
// bicriteria solution supplies per-client assignment costs, clients are
// sampled proportionally to cost share plus a uniform term, and each sample
// is weighted by its inverse inclusion probability. Falls back to
// pass-through whenever the size bound does not beat |C|.
inline WeightedClients build_coreset(const DistanceMatrix& d, int k, double nu,
                                     double delta, Objective objective,
                                     std::uint64_t seed) {
  if (objective == Objective::supplier)
    throw BadParameter("no coreset for the supplier objective");
  if (!(nu > 0 && nu < 1)) throw BadParameter("nu must be in (0,1)");
  if (!(delta > 0 && delta < 1)) throw BadParameter("delta must be in (0,1)");
  if (k < 1) throw BadParameter("k must be positive");
  const std::vector<int>& clients = d.clients();
  std::size_t m = coreset_size_bound(d.size(), k, nu);
  if (m >= clients.size() || clients.empty() || d.facilities().empty())
    return WeightedClients::all_of(d);

  // Greedy forward selection of k facilities as the bicriteria anchor.
  std::vector<double> assign(clients.size(),
                             std::numeric_limits<double>::infinity());
  std::vector<int> anchor;
  for (int round = 0; round < k; ++round) {
    int best_f = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int f : d.facilities()) {
      double total = 0;
      for (std::size_t i = 0; i < clients.size(); ++i) {
        double nd = std::min(assign[i], d(clients[i], f));
        total += objective == Objective::means ? nd * nd : nd;
      }
      if (total < best_cost) {
        best_cost = total;
        best_f = f;
      }
    }
    anchor.push_back(best_f);
    for (std::size_t i = 0; i < clients.size(); ++i)
      assign[i] = std::min(assign[i], d(clients[i], best_f));
  }

  std::vector<double> share(clients.size());
  double total = 0;
  for (std::size_t i = 0; i < clients.size(); ++i) {
    share[i] = objective == Objective::means ? assign[i] * assign[i] : assign[i];
    total += share[i];
  }
  // p_c = cost share / 2 + uniform / 2; bounded below by 1/(2|C|).
  std::vector<double> prob(clients.size());
  for (std::size_t i = 0; i < clients.size(); ++i) {
    double sens = total > 0 ? share[i] / total : 0.0;
    prob[i] = 0.5 * sens + 0.5 / static_cast<double>(clients.size());
  }

  Rng rng(seed);
  std::map<int, double> picked;  // client id -> accumulated weight
  for (std::size_t draw = 0; draw < m; ++draw) {
    std::size_t i = rng.next_weighted(prob);
    picked[clients[i]] += 1.0 / (static_cast<double>(m) * prob[i]);
  }
  WeightedClients out;
  out.nu = nu;
  out.delta = delta;
  for (const auto& [id, w] : picked) {
    out.ids.push_back(id);
    out.weights.push_back(w);
  }
  return out;
}

}  // namespace divclust

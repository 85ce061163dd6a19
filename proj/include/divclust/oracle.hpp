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
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "divclust/errors.hpp"
#include "divclust/instance.hpp"
#include "divclust/metric.hpp"

namespace divclust {

// Exhaustive solvers used as ground truth in tests; never on the production
// path. Caps abort loudly instead of degrading silently.
inline constexpr std::uint64_t kDefaultOracleCap = 2'000'000;

namespace detail {

inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                                     std::uint64_t cap) {
  if (k > n) return 0;
  long double v = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    v *= static_cast<long double>(n - i) / static_cast<long double>(i + 1);
    if (v > static_cast<long double>(cap) * 2) return cap + 1;
  }
  return static_cast<std::uint64_t>(v + 0.5);
}

}  // namespace detail

// Exact optimum over all k-subsets of F that satisfy the lower bounds;
// nullopt when no subset does. Ties break to the lexicographically smallest
// subset.
inline std::optional<Solution> brute_force_div(
    const DiversityInstance& inst, std::uint64_t cap = kDefaultOracleCap) {
  inst.validate();
  const std::vector<int>& fac = inst.d().facilities();
  const int n = static_cast<int>(fac.size());
  const int k = inst.k;
  if (detail::binomial_capped(n, k, cap) > cap)
    throw CapExceeded("C(" + std::to_string(n) + "," + std::to_string(k) +
                      ") k-subsets");
  std::vector<int> sorted_fac = fac;
  std::sort(sorted_fac.begin(), sorted_fac.end());

  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::optional<Solution> best;
  std::vector<int> subset(k);
  while (true) {
    for (int i = 0; i < k; ++i) subset[i] = sorted_fac[idx[i]];
    if (check_div_r_sat(inst, subset)) {
      double c = cost(inst.d(), subset, inst.objective);
      if (!best || c < best->cost) {
        best = Solution{subset, c, inst.objective, true, "brute-force-div"};
      }
    }
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

// Exact optimum over all transversals of a partition instance, evaluated
// against its own weighted clients.
inline Solution brute_force_pm(const PartitionInstance& p,
                               std::uint64_t cap = kDefaultOracleCap) {
  p.validate();
  long double space = 1;
  for (const auto& block : p.blocks) space *= block.size();
  if (space > static_cast<long double>(cap))
    throw CapExceeded(std::to_string(static_cast<double>(space)) +
                      " transversals");

  const int k = p.k();
  std::vector<int> pos(k, 0), pick(k);
  Solution best;
  best.cost = std::numeric_limits<double>::infinity();
  best.objective = p.objective;
  best.provenance = "brute-force-pm";
  while (true) {
    for (int j = 0; j < k; ++j) pick[j] = p.blocks[j][pos[j]];
    std::vector<int> sorted = pick;
    std::sort(sorted.begin(), sorted.end());
    double c = weighted_cost(p.d(), sorted, p.objective, p.clients);
    if (c < best.cost || (c == best.cost && sorted < best.facilities)) {
      best.cost = c;
      best.facilities = sorted;
    }
    int j = k - 1;
    while (j >= 0 && pos[j] + 1 == static_cast<int>(p.blocks[j].size())) {
      pos[j] = 0;
      --j;
    }
    if (j < 0) break;
    ++pos[j];
  }
  best.feasible = check_partition_feasible(p, best.facilities);
  return best;
}

// Exhaustive monotonicity and diminishing-returns check for a set function
// given as f(bitmask) over a ground set of at most 20 elements.
struct SubmodularityReport {
  bool monotone = true;
  bool submodular = true;
  std::uint32_t s_mask = 0;
  std::uint32_t t_mask = 0;
  int element = -1;

  bool ok() const { return monotone && submodular; }
};

inline SubmodularityReport check_submodular(
    int ground_size, const std::function<double(std::uint32_t)>& f,
    double tol = 1e-9) {
  if (ground_size < 0 || ground_size > 20)
    throw BadParameter("ground set too large for exhaustive check");
  SubmodularityReport report;
  const std::uint32_t full = (1u << ground_size) - 1;
  std::vector<double> val(full + 1);
  for (std::uint32_t m = 0; m <= full; ++m) val[m] = f(m);

  for (std::uint32_t s = 0; s <= full && report.monotone; ++s)
    for (int x = 0; x < ground_size; ++x) {
      if (s & (1u << x)) continue;
      if (val[s | (1u << x)] < val[s] - tol) {
        report.monotone = false;
        report.s_mask = s;
        report.element = x;
        break;
      }
    }

  // Enumerate T, its submasks S, and x outside T.
  for (std::uint32_t t = 0; t <= full && report.submodular; ++t) {
    std::uint32_t s = t;
    while (true) {
      for (int x = 0; x < ground_size; ++x) {
        if (t & (1u << x)) continue;
        double gain_s = val[s | (1u << x)] - val[s];
        double gain_t = val[t | (1u << x)] - val[t];
        if (gain_s < gain_t - tol) {
          report.submodular = false;
          report.s_mask = s;
          report.t_mask = t;
          report.element = x;
          break;
        }
      }
      if (!report.submodular || s == 0) break;
      s = (s - 1) & t;
    }
  }
  return report;
}

}  // namespace divclust

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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "divclust/coreset.hpp"
#include "divclust/errors.hpp"
#include "divclust/instance.hpp"
#include "divclust/metric.hpp"

namespace divclust {

// Partition of F keyed by characteristic vector; empty keys are omitted, so
// there are at most min(2^t, |F|) parts. Keys ascend in mask order and every
// part is sorted, which keeps all downstream enumeration deterministic.
struct FacilityPartition {
  std::vector<GroupMask> keys;
  std::vector<std::vector<int>> parts;

  int part_count() const { return static_cast<int>(keys.size()); }
};

inline FacilityPartition build_partition(const DiversityInstance& inst) {
  std::map<GroupMask, std::vector<int>> by_key;
  for (int f : inst.d().facilities()) by_key[inst.mask_of(f)].push_back(f);
  FacilityPartition p;
  for (auto& [key, members] : by_key) {
    std::sort(members.begin(), members.end());
    p.keys.push_back(key);
    p.parts.push_back(std::move(members));
  }
  return p;
}

// A k-multiset of parts with its element-wise requirement sum.
struct ConstraintPattern {
  std::vector<int> part_ids;  // non-decreasing, size k
  std::vector<int> sum;       // per-group coverage of the multiset
  bool feasible = false;      // sum >= r element-wise
};

// Lazily enumerates k-multisets of parts in canonical (non-decreasing)
// order and yields only those that are feasible and whose parts hold enough
// distinct facilities to honor their multiplicity. The 2^{tk} space is never
// materialized.
class PatternStream {
 public:
  PatternStream(const FacilityPartition& partition, std::vector<int> req, int k)
      : partition_(&partition), req_(std::move(req)), k_(k) {
    if (k_ < 1) throw BadParameter("k must be positive");
    if (partition_->part_count() > 0) idx_.assign(k_, 0);
  }

  std::optional<ConstraintPattern> next() {
    while (!idx_.empty()) {
      ++enumerated_;
      std::optional<ConstraintPattern> out = evaluate();
      advance();
      if (out) {
        ++yielded_;
        return out;
      }
    }
    return std::nullopt;
  }

  std::uint64_t enumerated() const { return enumerated_; }
  std::uint64_t yielded() const { return yielded_; }

 private:
  std::optional<ConstraintPattern> evaluate() const {
    const int t = static_cast<int>(req_.size());
    std::vector<int> sum(t, 0);
    std::vector<int> mult(partition_->part_count(), 0);
    for (int id : idx_) {
      ++mult[id];
      for (int i = 0; i < t; ++i)
        if (partition_->keys[id].test(i)) ++sum[i];
    }
    for (int i = 0; i < t; ++i)
      if (sum[i] < req_[i]) return std::nullopt;
    for (int p = 0; p < partition_->part_count(); ++p)
      if (mult[p] > static_cast<int>(partition_->parts[p].size()))
        return std::nullopt;
    ConstraintPattern cp;
    cp.part_ids = idx_;
    cp.sum = std::move(sum);
    cp.feasible = true;
    return cp;
  }

  // Odometer over non-decreasing index tuples.
  void advance() {
    const int parts = partition_->part_count();
    int pos = k_ - 1;
    while (pos >= 0 && idx_[pos] == parts - 1) --pos;
    if (pos < 0) {
      idx_.clear();
      return;
    }
    int v = idx_[pos] + 1;
    for (int j = pos; j < k_; ++j) idx_[j] = v;
  }

  const FacilityPartition* partition_;
  std::vector<int> req_;
  int k_;
  std::vector<int> idx_;
  std::uint64_t enumerated_ = 0;
  std::uint64_t yielded_ = 0;
};

inline std::vector<ConstraintPattern> enumerate_feasible_patterns(
    const FacilityPartition& partition, const std::vector<int>& req, int k) {
  PatternStream stream(partition, req, k);
  std::vector<ConstraintPattern> out;
  while (auto p = stream.next()) out.push_back(std::move(*p));
  return out;
}

// Turns a feasible pattern into k disjoint blocks. A part with multiplicity
// m contributes its original facilities as layer 0 plus m-1 copy layers of
// fresh points. Copies sit at `spacing` from their original and from each
// other; all other distances gain `spacing` per secondary endpoint, which
// keeps the extended matrix a metric whenever spacing <= 2*d_min. With
// spacing = 0 the copies are exact clones and costs are undistorted.
inline PartitionInstance materialize(const FacilityPartition& partition,
                                     const ConstraintPattern& pattern,
                                     const std::shared_ptr<const DistanceMatrix>& metric,
                                     const WeightedClients& clients,
                                     Objective objective,
                                     double spacing = 0.0) {
  if (!pattern.feasible) throw BadParameter("pattern is not feasible");
  std::vector<std::pair<int, int>> mult;  // (part id, multiplicity), ascending
  for (int id : pattern.part_ids) {
    if (id < 0 || id >= partition.part_count())
      throw EmptyPart("pattern references unknown part " + std::to_string(id));
    if (!mult.empty() && mult.back().first == id)
      ++mult.back().second;
    else
      mult.emplace_back(id, 1);
  }

  const int base_n = metric->size();
  int copies = 0;
  for (auto [id, m] : mult)
    copies += (m - 1) * static_cast<int>(partition.parts[id].size());

  PartitionInstance out;
  out.objective = objective;
  out.clients = clients;
  out.copy_spacing = spacing;
  out.source_of.resize(base_n + copies);
  for (int p = 0; p < base_n; ++p) out.source_of[p] = p;

  std::vector<char> secondary(base_n + copies, 0);
  std::vector<int> facility_ids = metric->facilities();
  int next_id = base_n;
  for (auto [id, m] : mult) {
    const std::vector<int>& part = partition.parts[id];
    for (int layer = 0; layer < m; ++layer) {
      std::vector<int> block;
      if (layer == 0) {
        block = part;
      } else {
        for (int f : part) {
          out.source_of[next_id] = f;
          secondary[next_id] = 1;
          facility_ids.push_back(next_id);
          block.push_back(next_id);
          ++next_id;
        }
      }
      out.blocks.push_back(std::move(block));
      out.block_part.push_back(id);
      out.block_layer.push_back(layer);
    }
  }

  if (copies == 0) {
    out.metric = metric;
  } else {
    const int n = base_n + copies;
    std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        int ou = out.source_of[u], ov = out.source_of[v];
        double d;
        if (ou == ov) {
          d = spacing;
        } else {
          d = (*metric)(ou, ov) + spacing * (secondary[u] + secondary[v]);
        }
        entries[static_cast<std::size_t>(u) * n + v] = d;
        entries[static_cast<std::size_t>(v) * n + u] = d;
      }
    }
    out.metric = std::make_shared<DistanceMatrix>(
        n, std::move(entries), metric->clients(), std::move(facility_ids),
        MetricValidation::off);
  }
  out.validate();
  return out;
}

// Maps a per-block selection of the extended universe back to k distinct
// original facilities. Copy collisions are resolved from the same part,
// greedily by marginal cost on the instance's own clients, ties to the
// lowest id. Collisions can only arise for parts whose size covers their
// multiplicity, so a replacement always exists.
inline std::vector<int> collapse_solution(const PartitionInstance& p,
                                          std::span<const int> chosen) {
  // Recover the per-block pick; blocks are disjoint so it is unique.
  std::vector<int> sorted(chosen.begin(), chosen.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> aligned(p.k(), -1);
  for (int b = 0; b < p.k(); ++b)
    for (int f : p.blocks[b])
      if (std::binary_search(sorted.begin(), sorted.end(), f)) {
        if (aligned[b] != -1)
          throw BadParameter("selection is not a transversal");
        aligned[b] = f;
      }
  for (int b = 0; b < p.k(); ++b)
    if (aligned[b] == -1) throw BadParameter("selection misses a block");

  std::vector<int> result;
  std::vector<int> pending_blocks;
  for (std::size_t b = 0; b < aligned.size(); ++b) {
    int orig = p.original_id(aligned[b]);
    if (std::find(result.begin(), result.end(), orig) == result.end())
      result.push_back(orig);
    else
      pending_blocks.push_back(static_cast<int>(b));
  }
  for (int b : pending_blocks) {
    std::vector<int> candidates;
    for (int f : p.blocks[b]) {
      int orig = p.original_id(f);
      if (std::find(result.begin(), result.end(), orig) == result.end() &&
          std::find(candidates.begin(), candidates.end(), orig) ==
              candidates.end())
        candidates.push_back(orig);
    }
    std::sort(candidates.begin(), candidates.end());
    if (candidates.empty())
      throw EmptyPart("no replacement for colliding copy in block " +
                      std::to_string(b));
    int best = candidates.front();
    if (candidates.size() > 1 && !p.clients.ids.empty()) {
      double best_cost = std::numeric_limits<double>::infinity();
      for (int cand : candidates) {
        std::vector<int> trial = result;
        trial.push_back(cand);
        double c = weighted_cost(p.d(), trial, p.objective, p.clients);
        if (c < best_cost) {
          best_cost = c;
          best = cand;
        }
      }
    }
    result.push_back(best);
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace divclust

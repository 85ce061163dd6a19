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
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "divclust/coreset.hpp"
#include "divclust/errors.hpp"
#include "divclust/metric.hpp"

namespace divclust {

// Group-membership bit vector of a facility across t groups. t packs into
// one word for t <= 64; wider instances spill into more words.
class GroupMask {
 public:
  GroupMask() = default;
  explicit GroupMask(int width)
      : width_(width), words_((width + 63) / 64, 0) {}

  int width() const { return width_; }

  bool test(int i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += __builtin_popcountll(w);
    return c;
  }

  // Element-wise dominance: every group covered by `other` is covered here.
  bool covers(const GroupMask& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((o.words_[i] & ~words_[i]) != 0) return false;
    return true;
  }

  bool operator==(const GroupMask& o) const = default;
  std::strong_ordering operator<=>(const GroupMask& o) const {
    if (auto c = width_ <=> o.width_; c != 0) return c;
    return words_ <=> o.words_;
  }

  std::string to_string() const {
    std::string s(width_, '0');
    for (int i = 0; i < width_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

 private:
  int width_ = 0;
  std::vector<std::uint64_t> words_;
};

// A diversity-aware clustering instance: metric universe with client and
// facility sets, t possibly intersecting facility groups, per-group
// lower-bound requirements and the solution size k.
struct DiversityInstance {
  std::shared_ptr<const DistanceMatrix> metric;
  std::vector<std::vector<int>> groups;
  std::vector<int> requirements;
  int k = 0;
  Objective objective = Objective::median;

  const DistanceMatrix& d() const { return *metric; }
  int group_count() const { return static_cast<int>(groups.size()); }

  void validate() const {
    if (!metric) throw BadParameter("instance has no metric");
    if (groups.empty()) throw SchemaError("groups", "at least one group required");
    if (groups.size() != requirements.size())
      throw SchemaError("requirements", "length differs from group count");
    if (k < 1) throw SchemaError("k", "k must be positive");
    if (k > static_cast<int>(metric->facilities().size()))
      throw SchemaError("k", "k exceeds the number of facilities");
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (int f : groups[i]) {
        if (f < 0 || f >= metric->size() || !metric->is_facility(f))
          throw SchemaError("groups",
                            "group " + std::to_string(i) + " names non-facility " +
                                std::to_string(f));
      }
      if (requirements[i] < 0)
        throw SchemaError("requirements", "negative requirement");
      if (requirements[i] > k)
        throw SchemaError("requirements",
                          "requirement " + std::to_string(i) + " exceeds k");
    }
  }

  GroupMask mask_of(int f) const {
    GroupMask m(group_count());
    for (int i = 0; i < group_count(); ++i)
      if (std::find(groups[i].begin(), groups[i].end(), f) != groups[i].end())
        m.set(i);
    return m;
  }
};

inline GroupMask characteristic_vector(const DiversityInstance& inst, int f) {
  if (f < 0 || f >= inst.d().size() || !inst.d().is_facility(f))
    throw IndexOutOfRange("facility id " + std::to_string(f));
  return inst.mask_of(f);
}

// True iff |S| = k and every group meets its lower bound. Duplicate ids in S
// collapse, so a multiset never passes by double counting.
inline bool check_div_r_sat(const DiversityInstance& inst,
                            std::span<const int> s) {
  std::vector<int> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (static_cast<int>(sorted.size()) != inst.k) return false;
  for (int f : sorted)
    if (f < 0 || f >= inst.d().size() || !inst.d().is_facility(f)) return false;
  for (std::size_t i = 0; i < inst.groups.size(); ++i) {
    int hit = 0;
    for (int f : inst.groups[i])
      if (std::binary_search(sorted.begin(), sorted.end(), f)) ++hit;
    if (hit < inst.requirements[i]) return false;
  }
  return true;
}

// A k-partition-matroid instance: k disjoint facility blocks over a (possibly
// copy-extended) metric plus a weighted client set. `source_of` maps every
// point of the extended universe back to its original id so solutions are
// always reported in original ids.
struct PartitionInstance {
  std::shared_ptr<const DistanceMatrix> metric;
  std::vector<std::vector<int>> blocks;
  WeightedClients clients;
  Objective objective = Objective::median;
  std::vector<int> source_of;   // extended point -> original id (identity for base)
  std::vector<int> block_part;  // block -> originating part ordinal (-1 if direct)
  std::vector<int> block_layer; // block -> copy layer (0 = original points)
  double copy_spacing = 0.0;

  const DistanceMatrix& d() const { return *metric; }
  int k() const { return static_cast<int>(blocks.size()); }

  int original_id(int p) const {
    return source_of.empty() ? p : source_of[p];
  }

  void validate() const {
    if (!metric) throw BadParameter("instance has no metric");
    if (blocks.empty()) throw BadParameter("no blocks");
    std::vector<char> seen(metric->size(), 0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw EmptyBlock(static_cast<int>(b));
      for (int f : blocks[b]) {
        if (f < 0 || f >= metric->size() || !metric->is_facility(f))
          throw IndexOutOfRange("block facility " + std::to_string(f));
        if (seen[f])
          throw BadParameter("blocks are not disjoint at facility " +
                             std::to_string(f));
        seen[f] = 1;
      }
    }
  }

  // Two blocks are interchangeable when they are copy layers of the same
  // part with identical distance offsets.
  bool blocks_equivalent(int a, int b) const {
    if (block_part.empty() || block_part[a] < 0 || block_part[a] != block_part[b])
      return false;
    if (copy_spacing == 0.0) return true;
    return (block_layer[a] > 0) == (block_layer[b] > 0);
  }
};

// True iff S selects exactly one facility from every block.
inline bool check_partition_feasible(const PartitionInstance& p,
                                     std::span<const int> s) {
  std::vector<int> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    return false;
  if (sorted.size() != static_cast<std::size_t>(p.k())) return false;
  for (const auto& block : p.blocks) {
    int hit = 0;
    for (int f : block)
      if (std::binary_search(sorted.begin(), sorted.end(), f)) ++hit;
    if (hit != 1) return false;
  }
  return true;
}

// A solved instance: chosen facilities (original ids, sorted), the objective
// value, and the algorithm that produced it.
struct Solution {
  std::vector<int> facilities;
  double cost = 0.0;
  Objective objective = Objective::median;
  bool feasible = false;
  std::string provenance;
};

// Strict total order used by every min-reduction: cost first, then the
// lexicographically smallest facility set. Makes parallel reductions
// independent of scheduling.
inline bool solution_better(const Solution& a, const Solution& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.facilities < b.facilities;
}

}  // namespace divclust

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

#include <limits>
#include <queue>
#include <vector>

namespace divclust {

// Maximum bipartite matching via Hopcroft-Karp layering. Left vertices are
// [0, n_left), right vertices [0, n_right), adjacency lists sorted by the
// caller for deterministic augmentation.
class BipartiteMatcher {
 public:
  BipartiteMatcher(int n_left, int n_right,
                   std::vector<std::vector<int>> adjacency)
      : nl_(n_left), nr_(n_right), adj_(std::move(adjacency)) {}

  // Returns the matching size; pairings are exposed afterwards.
  int solve() {
    match_l_.assign(nl_, -1);
    match_r_.assign(nr_, -1);
    int matched = 0;
    while (bfs_layers()) {
      for (int u = 0; u < nl_; ++u)
        if (match_l_[u] == -1 && dfs_augment(u)) ++matched;
    }
    return matched;
  }

  const std::vector<int>& left_match() const { return match_l_; }
  const std::vector<int>& right_match() const { return match_r_; }

 private:
  static constexpr int kInf = std::numeric_limits<int>::max();

  bool bfs_layers() {
    layer_.assign(nl_, kInf);
    std::queue<int> q;
    for (int u = 0; u < nl_; ++u)
      if (match_l_[u] == -1) {
        layer_[u] = 0;
        q.push(u);
      }
    bool reachable = false;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj_[u]) {
        int w = match_r_[v];
        if (w == -1) {
          reachable = true;
        } else if (layer_[w] == kInf) {
          layer_[w] = layer_[u] + 1;
          q.push(w);
        }
      }
    }
    return reachable;
  }

  bool dfs_augment(int u) {
    for (int v : adj_[u]) {
      int w = match_r_[v];
      if (w == -1 || (layer_[w] == layer_[u] + 1 && dfs_augment(w))) {
        match_l_[u] = v;
        match_r_[v] = u;
        return true;
      }
    }
    layer_[u] = kInf;
    return false;
  }

  int nl_, nr_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_l_, match_r_, layer_;
};

}  // namespace divclust

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
#include <memory>
#include <vector>

#include "divclust/errors.hpp"
#include "divclust/instance.hpp"
#include "divclust/metric.hpp"
#include "divclust/rng.hpp"

namespace divclust {

// Uniform random Euclidean instance with independent group membership.
struct EuclideanRandomParams {
  int n_clients = 10;
  int n_facilities = 10;
  bool shared_points = false;  // clients and facilities are the same points
  int dim = 2;
  int t = 2;
  double membership_prob = 0.5;
  int k = 2;
  int max_requirement = 1;
  Objective objective = Objective::median;
};

inline DiversityInstance generate_euclidean_random(
    const EuclideanRandomParams& p, std::uint64_t seed) {
  if (p.n_clients < 1 || p.n_facilities < 1 || p.dim < 1 || p.t < 1)
    throw BadParameter("counts and dimensions must be positive");
  if (p.membership_prob < 0 || p.membership_prob > 1)
    throw BadParameter("membership_prob must lie in [0,1]");
  if (p.k < 1 || p.k > p.n_facilities) throw BadParameter("k out of range");
  if (p.max_requirement < 0 || p.max_requirement > p.k)
    throw BadParameter("max_requirement out of range");
  Rng rng(seed);
  int n = p.shared_points ? std::max(p.n_clients, p.n_facilities)
                          : p.n_clients + p.n_facilities;
  std::vector<std::vector<double>> pts(n, std::vector<double>(p.dim));
  for (auto& pt : pts)
    for (double& x : pt) x = rng.next_double();
  std::vector<int> clients, facilities;
  if (p.shared_points) {
    for (int i = 0; i < p.n_clients; ++i) clients.push_back(i);
    for (int i = 0; i < p.n_facilities; ++i) facilities.push_back(i);
  } else {
    for (int i = 0; i < p.n_clients; ++i) clients.push_back(i);
    for (int i = 0; i < p.n_facilities; ++i)
      facilities.push_back(p.n_clients + i);
  }

  DiversityInstance inst;
  inst.metric = std::make_shared<DistanceMatrix>(DistanceMatrix::from_coordinates(
      pts, std::move(clients), std::move(facilities)));
  inst.k = p.k;
  inst.objective = p.objective;
  inst.groups.resize(p.t);
  for (int i = 0; i < p.t; ++i)
    for (int f : inst.metric->facilities())
      if (rng.next_bool(p.membership_prob)) inst.groups[i].push_back(f);
  inst.requirements.resize(p.t);
  for (int i = 0; i < p.t; ++i) {
    int cap = std::min<int>(p.max_requirement,
                            static_cast<int>(inst.groups[i].size()));
    inst.requirements[i] = cap == 0 ? 0 : rng.next_int(0, cap);
  }
  inst.validate();
  return inst;
}

// Clustered points with groups aligned to clusters; group i collects the
// facilities of clusters congruent to i mod t plus random overlap. With t=1
// this degenerates to a plain clustering instance.
struct PlantedGroupsParams {
  int clusters = 3;
  int facilities_per_cluster = 3;
  int clients_per_cluster = 4;
  double spread = 0.05;
  int dim = 2;
  int t = 3;
  double overlap_prob = 0.1;
  int k = 3;
  Objective objective = Objective::median;
};

inline DiversityInstance generate_planted_groups(const PlantedGroupsParams& p,
                                                 std::uint64_t seed) {
  if (p.clusters < 1 || p.facilities_per_cluster < 1 ||
      p.clients_per_cluster < 0 || p.dim < 1 || p.t < 1)
    throw BadParameter("counts and dimensions must be positive");
  if (p.spread < 0 || p.overlap_prob < 0 || p.overlap_prob > 1)
    throw BadParameter("spread/overlap out of range");
  int n_fac = p.clusters * p.facilities_per_cluster;
  if (p.k < 1 || p.k > n_fac) throw BadParameter("k out of range");
  Rng rng(seed);
  std::vector<std::vector<double>> centers(p.clusters,
                                           std::vector<double>(p.dim));
  for (auto& c : centers)
    for (double& x : c) x = rng.next_double();

  std::vector<std::vector<double>> pts;
  std::vector<int> facilities, clients, cluster_of_facility;
  for (int c = 0; c < p.clusters; ++c)
    for (int i = 0; i < p.facilities_per_cluster; ++i) {
      std::vector<double> pt(p.dim);
      for (int d = 0; d < p.dim; ++d)
        pt[d] = centers[c][d] + (rng.next_double() - 0.5) * p.spread;
      facilities.push_back(static_cast<int>(pts.size()));
      cluster_of_facility.push_back(c);
      pts.push_back(std::move(pt));
    }
  for (int c = 0; c < p.clusters; ++c)
    for (int i = 0; i < p.clients_per_cluster; ++i) {
      std::vector<double> pt(p.dim);
      for (int d = 0; d < p.dim; ++d)
        pt[d] = centers[c][d] + (rng.next_double() - 0.5) * p.spread;
      clients.push_back(static_cast<int>(pts.size()));
      pts.push_back(std::move(pt));
    }

  DiversityInstance inst;
  inst.metric = std::make_shared<DistanceMatrix>(DistanceMatrix::from_coordinates(
      pts, std::move(clients), facilities));
  inst.k = p.k;
  inst.objective = p.objective;
  inst.groups.resize(p.t);
  for (std::size_t fi = 0; fi < facilities.size(); ++fi)
    for (int i = 0; i < p.t; ++i) {
      bool planted = cluster_of_facility[fi] % p.t == i;
      if (planted || rng.next_bool(p.overlap_prob))
        inst.groups[i].push_back(facilities[fi]);
    }
  inst.requirements.assign(p.t, 1);
  inst.validate();
  return inst;
}

// Adversarial feasibility structure from a random graph: one size-2 group
// per edge with requirement 1, unit distance on edges and n+1 off edges.
// Finding any feasible solution is exactly vertex cover, so the distances
// are intentionally non-metric and triangle validation is disabled.
struct VertexCoverParams {
  int n_vertices = 6;
  double edge_prob = 0.5;
  int k = 3;
  Objective objective = Objective::median;
};

inline DiversityInstance generate_vertex_cover_hard(const VertexCoverParams& p,
                                                    std::uint64_t seed) {
  if (p.n_vertices < 2) throw BadParameter("need at least two vertices");
  if (p.edge_prob < 0 || p.edge_prob > 1)
    throw BadParameter("edge_prob must lie in [0,1]");
  if (p.k < 1 || p.k > p.n_vertices) throw BadParameter("k out of range");
  Rng rng(seed);
  const int n = p.n_vertices;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_bool(p.edge_prob)) edges.emplace_back(u, v);
  if (edges.empty()) edges.emplace_back(0, 1);

  std::vector<double> d(static_cast<std::size_t>(n) * n,
                        static_cast<double>(n + 1));
  for (int u = 0; u < n; ++u) d[static_cast<std::size_t>(u) * n + u] = 0;
  for (auto [u, v] : edges) {
    d[static_cast<std::size_t>(u) * n + v] = 1;
    d[static_cast<std::size_t>(v) * n + u] = 1;
  }
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;

  DiversityInstance inst;
  inst.metric = std::make_shared<DistanceMatrix>(
      n, std::move(d), ids, ids, MetricValidation::off);
  inst.k = p.k;
  inst.objective = p.objective;
  for (auto [u, v] : edges) inst.groups.push_back({u, v});
  inst.requirements.assign(edges.size(), 1);
  inst.validate();
  return inst;
}

}  // namespace divclust

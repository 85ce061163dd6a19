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
#include <cstdio>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "divclust/errors.hpp"

namespace divclust {

enum class Objective { median, means, supplier };

inline std::string to_string(Objective o) {
  switch (o) {
    case Objective::median: return "median";
    case Objective::means: return "means";
    case Objective::supplier: return "supplier";
  }
  return "?";
}

inline Objective objective_from_string(const std::string& s) {
  if (s == "median") return Objective::median;
  if (s == "means") return Objective::means;
  if (s == "supplier") return Objective::supplier;
  throw BadParameter("unknown objective '" + s + "'");
}

enum class MetricValidation { automatic, on, off };

// Triangle checks are cubic; above this size `automatic` skips them and
// prints a warning instead.
inline constexpr int kTriangleValidationLimit = 512;

// Dense symmetric metric over a point universe, with designated client and
// facility index sets. Immutable after construction; all queries are
// read-only and safe to share across workers.
class DistanceMatrix {
 public:
  DistanceMatrix(int n, std::vector<double> entries, std::vector<int> clients,
                 std::vector<int> facilities,
                 MetricValidation validation = MetricValidation::automatic)
      : n_(n),
        entries_(std::move(entries)),
        clients_(std::move(clients)),
        facilities_(std::move(facilities)) {
    if (n_ < 0 || entries_.size() != static_cast<std::size_t>(n_) * n_)
      throw SchemaError("distances", "matrix is not n x n");
    check_ids(clients_, "clients");
    check_ids(facilities_, "facilities");
    is_facility_.assign(n_, 0);
    for (int f : facilities_) is_facility_[f] = 1;
    is_client_.assign(n_, 0);
    for (int c : clients_) is_client_[c] = 1;
    validate(validation);
  }

  static DistanceMatrix from_coordinates(
      const std::vector<std::vector<double>>& pts, std::vector<int> clients,
      std::vector<int> facilities,
      MetricValidation validation = MetricValidation::off) {
    int n = static_cast<int>(pts.size());
    std::size_t dim = pts.empty() ? 0 : pts[0].size();
    for (const auto& p : pts)
      if (p.size() != dim)
        throw SchemaError("coordinates", "rows have mixed dimension");
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        double s = 0;
        for (std::size_t i = 0; i < dim; ++i) {
          double diff = pts[u][i] - pts[v][i];
          s += diff * diff;
        }
        double dist = std::sqrt(s);
        d[static_cast<std::size_t>(u) * n + v] = dist;
        d[static_cast<std::size_t>(v) * n + u] = dist;
      }
    }
    // Euclidean matrices satisfy the axioms by construction; validation is
    // still honored when explicitly requested.
    return DistanceMatrix(n, std::move(d), std::move(clients),
                          std::move(facilities), validation);
  }

  int size() const { return n_; }
  const std::vector<int>& clients() const { return clients_; }
  const std::vector<int>& facilities() const { return facilities_; }
  bool is_client(int p) const { return is_client_[p] != 0; }
  bool is_facility(int p) const { return is_facility_[p] != 0; }

  double operator()(int u, int v) const {
    return entries_[static_cast<std::size_t>(u) * n_ + v];
  }

  double at_checked(int u, int v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
      throw IndexOutOfRange("point id " + std::to_string(u < 0 || u >= n_ ? u : v));
    return (*this)(u, v);
  }

  // Largest pairwise distance over the whole universe.
  double diameter() const {
    double m = 0;
    for (double e : entries_) m = std::max(m, e);
    return m;
  }

  // Smallest positive distance over the whole universe; 0 if none.
  double min_positive_all() const {
    double m = std::numeric_limits<double>::infinity();
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v) {
        double d = (*this)(u, v);
        if (d > 0) m = std::min(m, d);
      }
    return std::isinf(m) ? 0.0 : m;
  }

  // Smallest positive distance among facility/client points; 0 if none.
  double min_positive_distance() const {
    double m = std::numeric_limits<double>::infinity();
    std::vector<int> pts = relevant_points();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        double d = (*this)(pts[i], pts[j]);
        if (d > 0) m = std::min(m, d);
      }
    return std::isinf(m) ? 0.0 : m;
  }

  // Largest pairwise distance among facility/client points.
  double span_diameter() const {
    double m = 0;
    std::vector<int> pts = relevant_points();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        m = std::max(m, (*this)(pts[i], pts[j]));
    return m;
  }

  std::vector<int> relevant_points() const {
    std::vector<int> pts;
    pts.reserve(n_);
    for (int p = 0; p < n_; ++p)
      if (is_client_[p] || is_facility_[p]) pts.push_back(p);
    return pts;
  }

 private:
  void check_ids(const std::vector<int>& ids, const char* what) const {
    for (int p : ids)
      if (p < 0 || p >= n_)
        throw SchemaError(what, "id " + std::to_string(p) + " out of range");
  }

  void validate(MetricValidation mode) const {
    for (int u = 0; u < n_; ++u) {
      if ((*this)(u, u) != 0.0)
        throw MetricViolation(
            "d(" + std::to_string(u) + "," + std::to_string(u) + ") != 0", u, u);
      for (int v = u + 1; v < n_; ++v) {
        double duv = (*this)(u, v);
        if (duv < 0 || !std::isfinite(duv))
          throw MetricViolation("negative or non-finite distance at (" +
                                    std::to_string(u) + "," + std::to_string(v) + ")",
                                u, v);
        if (duv != (*this)(v, u))
          throw MetricViolation("asymmetric entry at (" + std::to_string(u) +
                                    "," + std::to_string(v) + ")",
                                u, v);
      }
    }
    bool triangle = mode == MetricValidation::on ||
                    (mode == MetricValidation::automatic &&
                     n_ < kTriangleValidationLimit);
    if (mode == MetricValidation::automatic && !triangle)
      std::fprintf(stderr,
                   "divclust: skipping O(n^3) triangle validation for n=%d\n",
                   n_);
    if (!triangle) return;
    double tol = 1e-9 * std::max(1.0, diameter());
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v) {
        if (v == u) continue;
        double duv = (*this)(u, v);
        for (int w = 0; w < n_; ++w) {
          if ((*this)(u, w) > duv + (*this)(v, w) + tol)
            throw MetricViolation(
                "triangle inequality fails: d(" + std::to_string(u) + "," +
                    std::to_string(w) + ") > d(" + std::to_string(u) + "," +
                    std::to_string(v) + ") + d(" + std::to_string(v) + "," +
                    std::to_string(w) + ")",
                u, v, w);
        }
      }
  }

  int n_;
  std::vector<double> entries_;
  std::vector<int> clients_;
  std::vector<int> facilities_;
  std::vector<char> is_client_;
  std::vector<char> is_facility_;
};

namespace detail {

inline double nearest_distance(const DistanceMatrix& d, int c,
                               std::span<const int> s) {
  double best = std::numeric_limits<double>::infinity();
  for (int f : s) best = std::min(best, d(c, f));
  return best;
}

}  // namespace detail

// Clustering cost of opening S, aggregated over the given clients. Weights
// multiply the per-client terms for median/means; supplier ignores them and
// returns the plain maximum. An empty `weights` span means unit weights.
inline double cost(const DistanceMatrix& d, std::span<const int> s,
                   Objective objective, std::span<const int> client_ids,
                   std::span<const double> weights) {
  if (s.empty()) throw EmptySolution();
  for (int f : s) {
    if (f < 0 || f >= d.size())
      throw IndexOutOfRange("facility id " + std::to_string(f));
    if (!d.is_facility(f))
      throw IndexOutOfRange("point " + std::to_string(f) + " is not a facility");
  }
  if (!weights.empty() && weights.size() != client_ids.size())
    throw BadParameter("weights not aligned with clients");
  for (double w : weights)
    if (w < 0) throw BadParameter("negative client weight");
  double total = 0;
  for (std::size_t i = 0; i < client_ids.size(); ++i) {
    int c = client_ids[i];
    if (c < 0 || c >= d.size())
      throw IndexOutOfRange("client id " + std::to_string(c));
    double nd = detail::nearest_distance(d, c, s);
    switch (objective) {
      case Objective::median:
        total += (weights.empty() ? 1.0 : weights[i]) * nd;
        break;
      case Objective::means:
        total += (weights.empty() ? 1.0 : weights[i]) * nd * nd;
        break;
      case Objective::supplier:
        total = std::max(total, nd);
        break;
    }
  }
  return total;
}

inline double cost(const DistanceMatrix& d, std::span<const int> s,
                   Objective objective) {
  return cost(d, s, objective, d.clients(), {});
}

// Closed ball: every p in `within` with d(center, p) <= radius.
inline std::vector<int> ball(const DistanceMatrix& d, int center, double radius,
                             std::span<const int> within) {
  if (center < 0 || center >= d.size())
    throw IndexOutOfRange("center id " + std::to_string(center));
  if (radius < 0) throw BadParameter("negative ball radius");
  std::vector<int> out;
  for (int p : within) {
    if (p < 0 || p >= d.size())
      throw IndexOutOfRange("point id " + std::to_string(p));
    if (d(center, p) <= radius) out.push_back(p);
  }
  return out;
}

// Discretized radius ladder. `levels` is strictly ascending and always starts
// with the dedicated zero level for exact hits. For the geometric grid every
// positive pairwise distance x has a level L with x <= L <= (1+eta)x; the top
// level is clipped to the diameter so no radius rounds past it.
struct RadiusGrid {
  double eta = 0.0;
  std::vector<double> levels;

  // Smallest level >= x (tiny relative slack so distances that generated a
  // level map back onto it).
  double level_for(double x) const {
    double key = x - 1e-12 * std::max(1.0, std::abs(x));
    auto it = std::lower_bound(levels.begin(), levels.end(), key);
    return it == levels.end() ? levels.back() : *it;
  }

  int bucket_of(double x) const {
    double key = x - 1e-12 * std::max(1.0, std::abs(x));
    auto it = std::lower_bound(levels.begin(), levels.end(), key);
    if (it == levels.end()) return static_cast<int>(levels.size()) - 1;
    return static_cast<int>(it - levels.begin());
  }

  static RadiusGrid geometric(const DistanceMatrix& d, double eta) {
    if (eta <= 0) throw BadParameter("eta must be positive");
    double dmin = d.min_positive_distance();
    double delta = d.span_diameter();
    if (dmin == 0.0) throw DegenerateMetric();
    RadiusGrid g;
    g.eta = eta;
    g.levels.push_back(0.0);
    double v = dmin;
    while (v < delta * (1 - 1e-12)) {
      g.levels.push_back(v);
      v *= (1 + eta);
    }
    g.levels.push_back(delta);
    return g;
  }

  // All distinct client-facility distances become levels; bucketing is then
  // exact and the leader-radius search carries no discretization error.
  static RadiusGrid exact(const DistanceMatrix& d,
                          std::span<const int> client_ids,
                          std::span<const int> facility_ids) {
    RadiusGrid g;
    g.eta = 0.0;
    g.levels.push_back(0.0);
    for (int c : client_ids)
      for (int f : facility_ids)
        if (d(c, f) > 0) g.levels.push_back(d(c, f));
    std::sort(g.levels.begin(), g.levels.end());
    g.levels.erase(std::unique(g.levels.begin(), g.levels.end()),
                   g.levels.end());
    return g;
  }
};

inline RadiusGrid radius_grid(const DistanceMatrix& d, double eta) {
  return RadiusGrid::geometric(d, eta);
}

}  // namespace divclust

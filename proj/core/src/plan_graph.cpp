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

#include "semcover/plan_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace semcover {

int PlanGraph::add_vertex(const Configuration& c) {
  configs_.push_back(c);
  adjacency_.emplace_back();
  return static_cast<int>(configs_.size()) - 1;
}

void PlanGraph::add_edge(int i, int j, double weight) {
  if (i == j || has_edge(i, j)) return;
  adjacency_[i].emplace_back(j, weight);
  adjacency_[j].emplace_back(i, weight);
}

bool PlanGraph::has_edge(int i, int j) const {
  for (const auto& [n, w] : adjacency_[i])
    if (n == j) return true;
  return false;
}

void PlanGraph::remove_edge(int i, int j) {
  auto drop = [](std::vector<std::pair<int, double>>& adj, int v) {
    adj.erase(std::remove_if(adj.begin(), adj.end(), [v](const auto& e) { return e.first == v; }),
              adj.end());
  };
  drop(adjacency_[i], j);
  drop(adjacency_[j], i);
}

int PlanGraph::nearest_vertex(const Vec3& p) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) {
    const double d = (configs_[i].position - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<int> PlanGraph::nearest_vertices(const Vec3& p, int k, double max_radius) const {
  std::vector<std::pair<double, int>> cand;
  const double r2 = max_radius * max_radius;
  for (int i = 0; i < size(); ++i) {
    const double d = (configs_[i].position - p).squaredNorm();
    if (d <= r2) cand.emplace_back(d, i);
  }
  std::sort(cand.begin(), cand.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < cand.size() && static_cast<int>(i) < k; ++i)
    out.push_back(cand[i].second);
  return out;
}

PlanGraph::ShortestPaths PlanGraph::shortest_paths(int source) const {
  ShortestPaths sp;
  sp.dist.assign(size(), std::numeric_limits<double>::infinity());
  sp.parent.assign(size(), -1);
  if (source < 0 || source >= size()) return sp;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  sp.dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > sp.dist[v]) continue;
    for (const auto& [n, w] : adjacency_[v]) {
      const double nd = d + w;
      if (nd < sp.dist[n]) {
        sp.dist[n] = nd;
        sp.parent[n] = v;
        queue.emplace(nd, n);
      }
    }
  }
  return sp;
}

std::vector<int> PlanGraph::extract_path(const ShortestPaths& sp, int target) const {
  std::vector<int> path;
  if (target < 0 || target >= size() || !std::isfinite(sp.dist[target])) return path;
  for (int v = target; v >= 0; v = sp.parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Configuration> PlanGraph::configs_along(std::span<const int> vertices) const {
  std::vector<Configuration> out;
  out.reserve(vertices.size());
  for (const int v : vertices) out.push_back(configs_[v]);
  return out;
}

std::optional<int> try_connect(PlanGraph& graph, const Configuration& c,
                               const OccupancyGrid& grid, const RobotBody& body,
                               const MotionModel& motion, double radius, int max_neighbors) {
  // Reuse an existing vertex when the configuration is already in the graph.
  const int existing = graph.nearest_vertex(c.position);
  if (existing >= 0 && (graph.config(existing).position - c.position).norm() < 1e-9 &&
      std::abs(angle_diff(graph.config(existing).yaw, c.yaw)) < 1e-9)
    return existing;

  const std::vector<int> near = graph.nearest_vertices(c.position, max_neighbors, radius);
  std::vector<std::pair<int, double>> edges;
  for (const int n : near) {
    if (grid.is_path_collision_free(c, graph.config(n), body))
      edges.emplace_back(n, motion.segment_time(c, graph.config(n)));
  }
  if (edges.empty()) return std::nullopt;
  const int v = graph.add_vertex(c);
  for (const auto& [n, w] : edges) graph.add_edge(v, n, w);
  return v;
}

PlanGraph build_sampled_graph(const OccupancyGrid& grid, const Configuration& root,
                              const AxisBox& bounds, const RobotBody& body,
                              const MotionModel& motion, const GraphBuildParams& params,
                              Rng& rng) {
  PlanGraph graph;
  graph.add_vertex(root);

  const AxisBox region = bounds.intersection(grid.bounds());
  std::vector<Configuration> pending;
  for (int s = 0; s < params.samples; ++s) {
    const Vec3 p(rng.uniform(region.min.x(), region.max.x()),
                 rng.uniform(region.min.y(), region.max.y()),
                 rng.uniform(region.min.z(), region.max.z()));
    const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const Configuration c(p, yaw);
    if (!grid.is_position_collision_free(p, body)) continue;
    if (!try_connect(graph, c, grid, body, motion, params.connection_radius,
                     params.max_neighbors))
      pending.push_back(c);
  }
  // Samples that landed ahead of the growing graph get another chance now
  // that the graph spans the region.
  bool progress = true;
  while (progress && !pending.empty()) {
    progress = false;
    std::vector<Configuration> still;
    for (const Configuration& c : pending) {
      if (try_connect(graph, c, grid, body, motion, params.connection_radius,
                      params.max_neighbors))
        progress = true;
      else
        still.push_back(c);
    }
    pending = std::move(still);
  }

  // Keep only the component reachable from the root.
  const PlanGraph::ShortestPaths sp = graph.shortest_paths(0);
  std::vector<int> keep;
  for (int i = 0; i < graph.size(); ++i)
    if (std::isfinite(sp.dist[i])) keep.push_back(i);
  if (keep.size() <= 1)
    throw IsolationError("graph sampling: no sample connects to the root");
  if (static_cast<int>(keep.size()) == graph.size()) return graph;

  PlanGraph pruned;
  std::vector<int> remap(graph.size(), -1);
  for (const int v : keep) remap[v] = pruned.add_vertex(graph.config(v));
  for (const int v : keep)
    for (const auto& [n, w] : graph.neighbors(v))
      if (remap[n] >= 0 && remap[v] < remap[n]) pruned.add_edge(remap[v], remap[n], w);
  return pruned;
}

}  // namespace semcover

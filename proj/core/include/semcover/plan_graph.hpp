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

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "semcover/geometry.hpp"
#include "semcover/rng.hpp"
#include "semcover/voxel_grid.hpp"

namespace semcover {

// Raised when a sampling-based graph cannot connect anything to its root.
struct IsolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphBuildParams {
  int samples = 300;
  int max_neighbors = 5;
  double connection_radius = 1.5;
};

// Undirected sampled graph over collision-free configurations with
// traversal-time edge weights. Vertex 0 is the root by builder convention.
class PlanGraph {
 public:
  int add_vertex(const Configuration& c);
  void add_edge(int i, int j, double weight);
  bool has_edge(int i, int j) const;
  void remove_edge(int i, int j);

  int size() const { return static_cast<int>(configs_.size()); }
  bool empty() const { return configs_.empty(); }
  const Configuration& config(int i) const { return configs_[i]; }
  std::span<const std::pair<int, double>> neighbors(int i) const { return adjacency_[i]; }

  // Vertex with minimum Euclidean distance to p; -1 when empty.
  int nearest_vertex(const Vec3& p) const;
  // Up to k nearest vertices within max_radius, closest first.
  std::vector<int> nearest_vertices(const Vec3& p, int k, double max_radius) const;

  struct ShortestPaths {
    std::vector<double> dist;
    std::vector<int> parent;
  };
  ShortestPaths shortest_paths(int source) const;
  // Vertex sequence source..target; empty when unreachable.
  std::vector<int> extract_path(const ShortestPaths& sp, int target) const;
  std::vector<Configuration> configs_along(std::span<const int> vertices) const;

 private:
  std::vector<Configuration> configs_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

// Connects `c` to up to max_neighbors nearest vertices within radius via
// collision-free straight edges. On success appends the vertex and returns
// its id; returns std::nullopt when no edge can be made.
std::optional<int> try_connect(PlanGraph& graph, const Configuration& c,
                               const OccupancyGrid& grid, const RobotBody& body,
                               const MotionModel& motion, double radius, int max_neighbors);

// Samples a collision-free graph inside `bounds` rooted at `root`: uniform
// position samples (uniform yaw), each connected to its nearest neighbors by
// collision-free edges; samples that cannot connect are dropped, and only
// the root-connected component is kept. Throws IsolationError when nothing
// connects to the root.
PlanGraph build_sampled_graph(const OccupancyGrid& grid, const Configuration& root,
                              const AxisBox& bounds, const RobotBody& body,
                              const MotionModel& motion, const GraphBuildParams& params,
                              Rng& rng);

}  // namespace semcover

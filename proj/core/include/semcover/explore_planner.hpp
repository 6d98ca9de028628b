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

#include "semcover/plan_graph.hpp"
#include "semcover/sim_world.hpp"

namespace semcover {

enum class GainMode { Volumetric, Surface };

struct ExploreParams {
  Vec3 local_box_extent = Vec3(20.0, 20.0, 6.0);  // centered at the robot
  GraphBuildParams graph;                          // dense local graph
  double gain_discount = 0.25;                     // 1/s, travel-time decay
  double sparsify_radius = 1.5;                    // global graph spacing
  double global_connect_radius = 4.0;              // robot -> global graph
  int global_connect_neighbors = 8;
};

// Gain of a candidate configuration under the selected objective.
int evaluate_gain(const OccupancyGrid& grid, const Configuration& xi, GainMode mode,
                  const DepthSensor& depth, const CameraSensor& camera);

// Vertex maximizing gain * exp(-discount * time); ties broken by lower
// index. std::nullopt when every (reachable) gain is zero.
std::optional<int> select_best_vertex(const std::vector<double>& gains,
                                      const std::vector<double>& times, double discount);

// Dense random graph around the robot, clipped to the grid. Vertex 0 is the
// robot configuration. Throws IsolationError when no sample connects.
PlanGraph build_local_graph(const OccupancyGrid& grid, const Configuration& xi_curr,
                            const AxisBox& world_bounds, const RobotBody& body,
                            const MotionModel& motion, const ExploreParams& params, Rng& rng);

struct ExplorationPlan {
  std::vector<Configuration> path;  // from the current configuration
  int target_vertex = -1;
  double gain = 0.0;
  double score = 0.0;
};

// Picks the best-scoring vertex of the local graph and returns the shortest
// path to it. std::nullopt signals zero gain everywhere (time to relocate).
std::optional<ExplorationPlan> plan_exploration_step(const PlanGraph& local,
                                                     const OccupancyGrid& grid, GainMode mode,
                                                     const DepthSensor& depth,
                                                     const CameraSensor& camera,
                                                     double gain_discount, int threads);

// Appends an executed path to the sparse global graph: vertices within
// sparsify_radius of an existing one merge into it, new vertices chain to
// the previous vertex's representative when the straight edge is free.
void update_global_graph(PlanGraph& global, std::span<const Configuration> executed,
                         const OccupancyGrid& grid, const RobotBody& body,
                         const MotionModel& motion, double sparsify_radius);

// Re-evaluates gain over the whole global graph and returns the path to the
// best positive vertex from the robot, or std::nullopt when every global
// vertex has zero gain (exploration complete for this objective) or the
// robot cannot connect to the graph.
std::optional<ExplorationPlan> relocate_to_frontier(PlanGraph& global, const OccupancyGrid& grid,
                                                    const Configuration& xi_curr, GainMode mode,
                                                    const DepthSensor& depth,
                                                    const CameraSensor& camera,
                                                    const RobotBody& body,
                                                    const MotionModel& motion,
                                                    const ExploreParams& params, int threads);

}  // namespace semcover

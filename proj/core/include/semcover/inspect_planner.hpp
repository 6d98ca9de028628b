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
#include "semcover/semantic_model.hpp"
#include "semcover/sim_world.hpp"
#include "semcover/tsp.hpp"

namespace semcover {

struct InspectParams {
  int samples = 400;               // graph vertices inside the inflated box
  GraphBuildParams graph = {400, 5, 1.5};
  double eta_percent = 20.0;       // greedy pool fraction
  int k_candidates = 3;
  double approach_radius = 4.0;    // robot -> graph connection
  int approach_neighbors = 8;
  double occlusion_slack = 0.0;    // set to one voxel by callers
};

// Sampled inspection graph plus the visibility set (uninspected faces
// inspectable at quality) of every vertex. Vertex `start` is the robot.
struct InspectionGraph {
  PlanGraph graph;
  std::vector<std::vector<int>> visibility;
  int start = 0;
};

// Builds a collision-free graph inside the semantic's oriented bounding box
// inflated by l_max, yaw facing the mesh centroid, and computes per-vertex
// visibility with purely geometric checks (frustum, distance, angle, and a
// conservative grid raycast that treats Unknown as blocking). Throws
// IsolationError when the robot configuration cannot connect to the graph.
InspectionGraph build_inspection_graph(const SemanticRecord& record, const OccupancyGrid& grid,
                                       const Configuration& xi_curr, const RobotBody& body,
                                       const CameraSensor& camera, double l_max,
                                       double theta_i_max, const MotionModel& motion,
                                       const AxisBox& world_bounds, const InspectParams& params,
                                       Rng& rng, int threads);

// Greedy randomized cover: repeatedly sorts vertices by residual visibility,
// draws uniformly from the top eta percent, and subtracts the chosen
// vertex's faces until every residual set is empty. The result covers the
// union of all visibility sets exactly.
std::vector<int> select_coverage_vertices(const InspectionGraph& ig, double eta_percent,
                                          Rng& rng);

struct InspectionTour {
  std::vector<int> vertices;  // visit order over the coverage vertices
  double cost = 0.0;          // execution time including the approach leg
};

// Orders the coverage vertices as an open tour from the robot vertex using
// pairwise shortest-path times through the graph. Throws std::runtime_error
// when some pair is unreachable.
InspectionTour order_vertices_tsp(const std::vector<int>& coverage, const InspectionGraph& ig,
                                  const MotionModel& motion);

struct InspectionCandidateDiag {
  int candidate = 0;
  int coverage_size = 0;
  double cost = 0.0;
};

struct InspectionPlan {
  std::vector<Configuration> path;  // from the robot through every vertex
  double cost = 0.0;
  std::vector<int> coverage_vertices;
  std::vector<InspectionCandidateDiag> diagnostics;
};

// Runs select + order k times on independent substreams and expands the
// cheapest candidate into a configuration path. std::nullopt when no vertex
// sees any uninspected face (the mesh is done or its remainder unreachable).
std::optional<InspectionPlan> plan_inspection(const InspectionGraph& ig, int k_candidates,
                                              double eta_percent, const MotionModel& motion,
                                              Rng& rng);

}  // namespace semcover

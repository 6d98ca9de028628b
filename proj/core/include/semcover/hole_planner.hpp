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

#include <functional>
#include <map>

#include "semcover/plan_graph.hpp"
#include "semcover/semantic_model.hpp"
#include "semcover/sim_world.hpp"

namespace semcover {

struct HolePlannerParams {
  int samples_per_edge = 64;
  double d_v_max = 4.0;                       // spherical sampling radius
  double theta_v_max = 75.0 * M_PI / 180.0;  // admissible viewing angle
  double connect_radius = 3.0;                // sample -> graph extension
  int connect_neighbors = 5;
  double visibility_slack = 0.0;              // set to one voxel by callers
};

// Viewpoint selected for one boundary edge.
struct HoleViewpoint {
  Configuration config;
  int edge = -1;          // index into the BoundaryInfo edge list
  double viewing_angle = 0.0;
  int graph_vertex = -1;  // vertex added to the hole-coverage graph
};

// Semantic whose mesh centroid is nearest to `position`; ties to lower id.
int select_closest_semantic(const std::map<int, SemanticRecord>& records,
                            const std::vector<int>& candidates, const Vec3& position);

// For each boundary edge, samples configurations in a sphere around the edge
// midpoint with the depth sensor aimed at it, extends the hole-coverage
// graph towards them, discards samples that are colliding, unconnectable, or
// blind to the edge, and keeps the admissible sample with the smallest
// viewing angle against the boundary face's in-plane outward direction.
// Edges with no admissible sample yield no viewpoint.
std::vector<HoleViewpoint> calculate_viewpoints(
    const TriangleMesh& mesh, const BoundaryInfo& boundary, const OccupancyGrid& grid,
    PlanGraph& hole_graph, const RobotBody& body, const DepthSensor& depth,
    const MotionModel& motion, const AxisBox& world_bounds, const HolePlannerParams& params,
    Rng& rng);

// Greedy pass over the candidate set in insertion order: each popped
// viewpoint also retires every candidate whose target edge it covers
// (within d_v_max and viewing angle under the limit). Coverage of every
// edge covered by the input is preserved.
std::vector<HoleViewpoint> reduce_viewpoints(const std::vector<HoleViewpoint>& candidates,
                                             const TriangleMesh& mesh,
                                             const BoundaryInfo& boundary,
                                             const HolePlannerParams& params);

struct HoleCoverageTraceRow {
  int iteration = 0;
  int semantic = -1;
  Configuration viewpoint;
  double viewing_angle = 0.0;
  int edges_before = 0;
  int edges_after = 0;
};

// Execution callbacks supplied by the mission layer.
struct HoleCoverageHooks {
  // Executes a planned path, applying sensor data as it goes; returns the
  // elapsed mission time.
  std::function<double(std::span<const Configuration>)> execute_path;
  // updateMesh for one semantic.
  std::function<void(int)> update_mesh;
  // Semantics (not yet handled this phase) that now have holes.
  std::function<std::vector<int>()> new_semantics_with_holes;
};

struct HoleCoverageResult {
  std::vector<HoleCoverageTraceRow> trace;
  std::vector<int> processed;  // semantics handled this phase, in order
};

// Iterative hole coverage over every semantic in lambda_h (closest first),
// one viewpoint per iteration, with a per-semantic execution-time budget.
// Newly holed semantics reported by the hooks are appended to the queue.
HoleCoverageResult run_hole_coverage(std::map<int, SemanticRecord>& records,
                                     std::vector<int> lambda_h, const OccupancyGrid& grid,
                                     PlanGraph& hole_graph, Configuration& xi_curr,
                                     const RobotBody& body, const DepthSensor& depth,
                                     const MotionModel& motion, const AxisBox& world_bounds,
                                     const HolePlannerParams& params, double t_hc,
                                     const HoleCoverageHooks& hooks, Rng& rng);

}  // namespace semcover

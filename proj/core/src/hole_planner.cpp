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

#include "semcover/hole_planner.hpp"

#include <algorithm>
#include <limits>

namespace semcover {

int select_closest_semantic(const std::map<int, SemanticRecord>& records,
                            const std::vector<int>& candidates, const Vec3& position) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const int id : candidates) {
    const auto it = records.find(id);
    if (it == records.end() || it->second.mesh().empty()) continue;
    const double d = (it->second.mesh().area_centroid() - position).norm();
    if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && id < best)) {
      best_d = d;
      best = id;
    }
  }
  return best;
}

std::vector<HoleViewpoint> calculate_viewpoints(
    const TriangleMesh& mesh, const BoundaryInfo& boundary, const OccupancyGrid& grid,
    PlanGraph& hole_graph, const RobotBody& body, const DepthSensor& depth,
    const MotionModel& motion, const AxisBox& world_bounds, const HolePlannerParams& params,
    Rng& rng) {
  std::vector<HoleViewpoint> out;

  for (std::size_t ei = 0; ei < boundary.edges.size(); ++ei) {
    const BoundaryEdge& edge = boundary.edges[ei];
    const Vec3 outward = boundary_outward_direction(mesh, edge);
    Rng edge_rng = rng.substream(ei);

    HoleViewpoint best;
    bool found = false;
    for (int s = 0; s < params.samples_per_edge; ++s) {
      const Configuration c = sample_spherical(edge.midpoint, params.d_v_max, edge_rng);
      if (!world_bounds.contains(c.position)) continue;
      if (!grid.is_position_collision_free(c.position, body)) continue;

      const Vec3 to_sample = c.position - edge.midpoint;
      if (to_sample.norm() < kGeomEps) continue;
      const double theta_v = angle_between(outward, to_sample);
      if (theta_v >= params.theta_v_max) continue;
      if (found && theta_v >= best.viewing_angle) continue;  // cannot win

      // The depth sensor must actually see the edge midpoint from here.
      if (!in_frustum(c, depth.frustum, depth.mount, edge.midpoint)) continue;
      if (grid.segment_occluded(c.position, edge.midpoint, params.visibility_slack)) continue;

      const std::optional<int> vertex = try_connect(hole_graph, c, grid, body, motion,
                                                    params.connect_radius,
                                                    params.connect_neighbors);
      if (!vertex) continue;

      best.config = c;
      best.edge = static_cast<int>(ei);
      best.viewing_angle = theta_v;
      best.graph_vertex = *vertex;
      found = true;
    }
    if (found) out.push_back(best);
  }
  return out;
}

std::vector<HoleViewpoint> reduce_viewpoints(const std::vector<HoleViewpoint>& candidates,
                                             const TriangleMesh& mesh,
                                             const BoundaryInfo& boundary,
                                             const HolePlannerParams& params) {
  std::vector<HoleViewpoint> selected;
  std::vector<bool> retired(candidates.size(), false);

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (retired[i]) continue;
    const HoleViewpoint& v = candidates[i];
    selected.push_back(v);
    retired[i] = true;

    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      if (retired[j]) continue;
      const BoundaryEdge& target = boundary.edges[candidates[j].edge];
      const Vec3 to_v = v.config.position - target.midpoint;
      if (to_v.norm() > params.d_v_max) continue;
      const Vec3 outward = boundary_outward_direction(mesh, target);
      if (angle_between(outward, to_v) >= params.theta_v_max) continue;
      retired[j] = true;
    }
  }
  return selected;
}

HoleCoverageResult run_hole_coverage(std::map<int, SemanticRecord>& records,
                                     std::vector<int> lambda_h, const OccupancyGrid& grid,
                                     PlanGraph& hole_graph, Configuration& xi_curr,
                                     const RobotBody& body, const DepthSensor& depth,
                                     const MotionModel& motion, const AxisBox& world_bounds,
                                     const HolePlannerParams& params, double t_hc,
                                     const HoleCoverageHooks& hooks, Rng& rng) {
  HoleCoverageResult result;
  int iteration = 0;
  std::uint64_t sample_stream = 0;

  while (!lambda_h.empty()) {
    const int semantic = select_closest_semantic(records, lambda_h, xi_curr.position);
    if (semantic < 0) break;
    SemanticRecord& record = records.at(semantic);
    double spent = 0.0;

    while (true) {
      const BoundaryInfo boundary = record.boundary_holes();
      if (boundary.edges.empty()) break;
      if (spent >= t_hc) break;

      Rng vp_rng = rng.substream(sample_stream++);
      const std::vector<HoleViewpoint> candidates =
          calculate_viewpoints(record.mesh(), boundary, grid, hole_graph, body, depth, motion,
                               world_bounds, params, vp_rng);
      if (candidates.empty()) break;
      const std::vector<HoleViewpoint> selected =
          reduce_viewpoints(candidates, record.mesh(), boundary, params);

      // Closest selected viewpoint by path length along the graph.
      const std::optional<int> from = try_connect(hole_graph, xi_curr, grid, body, motion,
                                                  params.connect_radius,
                                                  params.connect_neighbors);
      if (!from) break;
      const PlanGraph::ShortestPaths sp = hole_graph.shortest_paths(*from);
      const HoleViewpoint* goal = nullptr;
      double goal_dist = std::numeric_limits<double>::infinity();
      for (const HoleViewpoint& v : selected) {
        const double d = sp.dist[v.graph_vertex];
        if (d < goal_dist) {
          goal_dist = d;
          goal = &v;
        }
      }
      if (!goal) break;

      const std::vector<Configuration> path =
          hole_graph.configs_along(hole_graph.extract_path(sp, goal->graph_vertex));
      if (path.empty()) break;

      HoleCoverageTraceRow row;
      row.iteration = iteration++;
      row.semantic = semantic;
      row.viewpoint = goal->config;
      row.viewing_angle = goal->viewing_angle;
      row.edges_before = static_cast<int>(boundary.edges.size());

      const double elapsed = hooks.execute_path(path);
      spent += elapsed;
      record.hole_budget_used += elapsed;
      xi_curr = path.back();
      hooks.update_mesh(semantic);

      row.edges_after = static_cast<int>(record.boundary_holes().edges.size());
      result.trace.push_back(row);
    }

    result.processed.push_back(semantic);
    lambda_h.erase(std::remove(lambda_h.begin(), lambda_h.end(), semantic), lambda_h.end());
    for (const int fresh : hooks.new_semantics_with_holes()) {
      if (std::find(lambda_h.begin(), lambda_h.end(), fresh) == lambda_h.end() &&
          std::find(result.processed.begin(), result.processed.end(), fresh) ==
              result.processed.end())
        lambda_h.push_back(fresh);
    }
  }
  return result;
}

}  // namespace semcover

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

#include "semcover/inspect_planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "semcover/parallel.hpp"

namespace semcover {

InspectionGraph build_inspection_graph(const SemanticRecord& record, const OccupancyGrid& grid,
                                       const Configuration& xi_curr, const RobotBody& body,
                                       const CameraSensor& camera, double l_max,
                                       double theta_i_max, const MotionModel& motion,
                                       const AxisBox& world_bounds, const InspectParams& params,
                                       Rng& rng, int threads) {
  const TriangleMesh& mesh = record.mesh();
  if (mesh.empty()) throw std::invalid_argument("inspection graph: empty mesh");

  const OrientedBox obb = fit_oriented_box(mesh.vertices, 0.0).inflated(l_max);
  const Vec3 look_at = mesh.area_centroid();

  InspectionGraph ig;
  ig.start = ig.graph.add_vertex(xi_curr);

  // Uniform samples inside the inflated box, yaw facing the semantic.
  for (int s = 0; s < params.samples; ++s) {
    const Vec3 local(rng.uniform(-obb.half_extents.x(), obb.half_extents.x()),
                     rng.uniform(-obb.half_extents.y(), obb.half_extents.y()),
                     rng.uniform(-obb.half_extents.z(), obb.half_extents.z()));
    const Vec3 p = obb.center + obb.rotation * local;
    if (!world_bounds.contains(p) || !grid.in_bounds(p)) continue;
    if (!grid.is_position_collision_free(p, body)) continue;
    const Configuration c(p, yaw_towards(p, look_at));
    try_connect(ig.graph, c, grid, body, motion, params.graph.connection_radius,
                params.graph.max_neighbors);
  }

  // The robot vertex needs a wider reach; it may sit outside the box.
  if (ig.graph.neighbors(ig.start).empty()) {
    const std::vector<int> near =
        ig.graph.nearest_vertices(xi_curr.position, params.approach_neighbors, params.approach_radius);
    for (const int n : near) {
      if (n == ig.start) continue;
      if (grid.is_path_collision_free(xi_curr, ig.graph.config(n), body))
        ig.graph.add_edge(ig.start, n, motion.segment_time(xi_curr, ig.graph.config(n)));
    }
    if (ig.graph.neighbors(ig.start).empty())
      throw IsolationError("inspection graph: robot cannot connect");
  }

  // Drop vertices unreachable from the robot.
  {
    const PlanGraph::ShortestPaths sp = ig.graph.shortest_paths(ig.start);
    PlanGraph pruned;
    std::vector<int> remap(ig.graph.size(), -1);
    for (int v = 0; v < ig.graph.size(); ++v)
      if (std::isfinite(sp.dist[v])) remap[v] = pruned.add_vertex(ig.graph.config(v));
    for (int v = 0; v < ig.graph.size(); ++v) {
      if (remap[v] < 0) continue;
      for (const auto& [n, w] : ig.graph.neighbors(v))
        if (remap[n] >= 0 && remap[v] < remap[n]) pruned.add_edge(remap[v], remap[n], w);
    }
    ig.start = remap[ig.start];
    ig.graph = std::move(pruned);
  }

  // Visibility: which uninspected faces each vertex inspects at quality.
  const std::vector<int> targets = record.uninspected_faces();
  ig.visibility.assign(ig.graph.size(), {});
  parallel_for(ig.graph.size(), threads, [&](int v) {
    const Configuration& c = ig.graph.config(v);
    std::vector<int>& vis = ig.visibility[v];
    for (const int fi : targets) {
      const Face& f = mesh.faces[fi];
      const double d = (f.centroid - c.position).norm();
      if (d > l_max || d < kGeomEps) continue;
      if (viewing_angle(f.centroid, f.normal, c.position) >= theta_i_max) continue;
      if (!in_frustum(c, camera.frustum, camera.mount, f.centroid)) continue;
      if (grid.segment_occluded(c.position, f.centroid, params.occlusion_slack,
                                /*unknown_blocks=*/true))
        continue;
      vis.push_back(fi);
    }
  });
  return ig;
}

std::vector<int> select_coverage_vertices(const InspectionGraph& ig, double eta_percent,
                                          Rng& rng) {
  std::vector<std::vector<int>> residual = ig.visibility;
  std::vector<int> selected;

  while (true) {
    std::vector<std::pair<int, int>> ranked;  // (-|residual|, vertex)
    for (int v = 0; v < static_cast<int>(residual.size()); ++v)
      if (!residual[v].empty()) ranked.emplace_back(-static_cast<int>(residual[v].size()), v);
    if (ranked.empty()) break;
    std::sort(ranked.begin(), ranked.end());

    const int pool = std::max(
        1, static_cast<int>(std::ceil(ranked.size() * eta_percent / 100.0)));
    const int pick = ranked[rng.uniform_int(pool)].second;
    selected.push_back(pick);

    // Subtract the chosen vertex's faces from every residual set.
    const std::vector<int> covered = residual[pick];
    for (std::vector<int>& r : residual) {
      if (r.empty()) continue;
      std::vector<int> next;
      next.reserve(r.size());
      std::set_difference(r.begin(), r.end(), covered.begin(), covered.end(),
                          std::back_inserter(next));
      r = std::move(next);
    }
  }
  return selected;
}

InspectionTour order_vertices_tsp(const std::vector<int>& coverage, const InspectionGraph& ig,
                                  const MotionModel& motion) {
  (void)motion;  // edge weights already carry traversal times
  InspectionTour tour;
  if (coverage.empty()) return tour;

  const int n = static_cast<int>(coverage.size());
  std::vector<double> depot(n, 0.0);
  std::vector<std::vector<double>> pair(n, std::vector<double>(n, 0.0));

  {
    const PlanGraph::ShortestPaths sp = ig.graph.shortest_paths(ig.start);
    for (int i = 0; i < n; ++i) depot[i] = sp.dist[coverage[i]];
  }
  for (int i = 0; i < n; ++i) {
    const PlanGraph::ShortestPaths sp = ig.graph.shortest_paths(coverage[i]);
    for (int j = 0; j < n; ++j) pair[i][j] = sp.dist[coverage[j]];
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(depot[i]))
      throw std::runtime_error("inspection tour: vertex unreachable from the robot");
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(pair[i][j]))
        throw std::runtime_error("inspection tour: coverage vertices mutually unreachable");
  }

  const TspResult solved = solve_open_tour(depot, pair);
  tour.cost = solved.cost;
  tour.vertices.reserve(n);
  for (const int i : solved.order) tour.vertices.push_back(coverage[i]);
  return tour;
}

std::optional<InspectionPlan> plan_inspection(const InspectionGraph& ig, int k_candidates,
                                              double eta_percent, const MotionModel& motion,
                                              Rng& rng) {
  bool any = false;
  for (const auto& vis : ig.visibility)
    if (!vis.empty()) any = true;
  if (!any) return std::nullopt;

  std::optional<InspectionTour> best;
  std::vector<int> best_coverage;
  std::vector<InspectionCandidateDiag> diags;

  for (int k = 0; k < std::max(1, k_candidates); ++k) {
    Rng stream = rng.substream(k);
    const std::vector<int> coverage = select_coverage_vertices(ig, eta_percent, stream);
    const InspectionTour tour = order_vertices_tsp(coverage, ig, motion);
    diags.push_back({k, static_cast<int>(coverage.size()), tour.cost});
    if (!best || tour.cost < best->cost) {
      best = tour;
      best_coverage = coverage;
    }
  }

  // Expand the vertex order into a full configuration path.
  InspectionPlan plan;
  plan.cost = best->cost;
  plan.coverage_vertices = best_coverage;
  plan.diagnostics = std::move(diags);

  std::vector<int> sequence;
  int at = ig.start;
  sequence.push_back(at);
  for (const int target : best->vertices) {
    const PlanGraph::ShortestPaths sp = ig.graph.shortest_paths(at);
    const std::vector<int> leg = ig.graph.extract_path(sp, target);
    for (std::size_t i = 1; i < leg.size(); ++i) sequence.push_back(leg[i]);
    at = target;
  }
  plan.path = ig.graph.configs_along(sequence);
  return plan;
}

}  // namespace semcover

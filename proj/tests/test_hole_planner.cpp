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

#include <cmath>

#include <doctest.h>

#include "support/synthetic.hpp"

using namespace semcover;

namespace {

SemanticModelParams model_params() {
  SemanticModelParams p;
  p.subsample_cell = 0.1;
  p.mesh_cell = 0.1;
  p.truncation = 0.2;
  p.min_hole_perimeter = 0.5;
  return p;
}

OccupancyGrid all_free_grid(const Vec3& extent, double voxel = 0.25) {
  OccupancyGrid grid = OccupancyGrid::covering({Vec3::Zero(), extent}, voxel);
  const auto& d = grid.dims();
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) grid.set_state({x, y, z}, VoxelState::Free);
  return grid;
}

DepthSensor lidar() {
  DepthSensor s;
  s.frustum.fov_h_deg = 360;
  s.frustum.fov_v_deg = 90;
  s.frustum.max_range = 8;
  return s;
}

// A record with one observed plane patch in the middle of a free room: its
// mesh is open, so every boundary edge is a hole frontier.
SemanticRecord plane_record(const Vec3& center) {
  SemanticRecord record(1, model_params());
  const Vec3 lo = center - Vec3(0.5, 0.5, 0.0);
  const Vec3 hi = center + Vec3(0.5, 0.5, 0.0);
  record.accumulate_points(center + Vec3(0.01, 0.02, 2.0),
                           testing::plane_points(2, center.z(), lo, Vec3(hi.x(), hi.y(), center.z() + 1.0), 0.05));
  record.rebuild_mesh();
  return record;
}

}  // namespace

TEST_CASE("closest semantic selection by mesh centroid with id tie-break") {
  std::map<int, SemanticRecord> records;
  auto& a = records.emplace(1, plane_record(Vec3(2, 2, 2))).first->second;
  auto& b = records.emplace(2, plane_record(Vec3(6, 2, 2))).first->second;
  REQUIRE_FALSE(a.mesh().empty());
  REQUIRE_FALSE(b.mesh().empty());

  CHECK(select_closest_semantic(records, {1, 2}, Vec3(2, 2, 2)) == 1);
  CHECK(select_closest_semantic(records, {1, 2}, Vec3(6, 2, 2)) == 2);
  CHECK(select_closest_semantic(records, {1}, Vec3(6, 2, 2)) == 1);

  // An exact tie (identical meshes) resolves to the lower id.
  std::map<int, SemanticRecord> twins;
  twins.emplace(3, plane_record(Vec3(2, 2, 2)));
  twins.emplace(7, plane_record(Vec3(2, 2, 2)));
  CHECK(select_closest_semantic(twins, {7, 3}, Vec3(5, 5, 1)) == 3);
}

TEST_CASE("viewpoint calculation: open edges get low-angle viewpoints, sealed edges none") {
  SemanticRecord record = plane_record(Vec3(4, 4, 2));
  const BoundaryInfo boundary = record.boundary_holes();
  REQUIRE_FALSE(boundary.edges.empty());

  OccupancyGrid grid = all_free_grid(Vec3(8, 8, 4));
  RobotBody body;
  MotionModel motion;
  HolePlannerParams params;
  params.samples_per_edge = 64;
  params.d_v_max = 3.0;
  params.visibility_slack = grid.voxel_size();

  PlanGraph hole_graph;
  hole_graph.add_vertex(Configuration(1.0, 1.0, 2.0, 0.0));

  Rng rng(1001);
  const auto viewpoints = calculate_viewpoints(record.mesh(), boundary, grid, hole_graph, body,
                                               lidar(), motion, grid.bounds(), params, rng);
  REQUIRE_FALSE(viewpoints.empty());
  // Most edges admit a viewpoint in free space; angles are admissible and at
  // S=64 the best is well under 30 degrees.
  CHECK(viewpoints.size() >= boundary.edges.size() / 2);
  double min_angle = 1e9;
  for (const HoleViewpoint& v : viewpoints) {
    CHECK(v.viewing_angle < params.theta_v_max);
    CHECK((v.config.position - boundary.edges[v.edge].midpoint).norm() <= params.d_v_max + 1e-9);
    CHECK(v.graph_vertex >= 0);
    min_angle = std::min(min_angle, v.viewing_angle);
  }
  CHECK(min_angle < 30.0 * M_PI / 180.0);

  SUBCASE("a vanishing angle limit empties the candidate set") {
    HolePlannerParams strict = params;
    strict.theta_v_max = 0.0;
    PlanGraph g2;
    g2.add_vertex(Configuration(1.0, 1.0, 2.0, 0.0));
    Rng rng2(1001);
    CHECK(calculate_viewpoints(record.mesh(), boundary, grid, g2, body, lidar(), motion,
                               grid.bounds(), strict, rng2)
              .empty());
  }

  SUBCASE("edges sealed inside walls yield no viewpoint") {
    // Occupy everything within d_v_max of the mesh except the mesh cells.
    OccupancyGrid sealed = all_free_grid(Vec3(8, 8, 4));
    const auto& d = sealed.dims();
    for (int z = 0; z < d[2]; ++z)
      for (int y = 0; y < d[1]; ++y)
        for (int x = 0; x < d[0]; ++x) sealed.set_state({x, y, z}, VoxelState::Occupied);
    PlanGraph g3;
    g3.add_vertex(Configuration(1.0, 1.0, 2.0, 0.0));
    Rng rng3(1001);
    CHECK(calculate_viewpoints(record.mesh(), boundary, sealed, g3, body, lidar(), motion,
                               sealed.bounds(), params, rng3)
              .empty());
  }
}

TEST_CASE("viewpoint reduction: single covering viewpoint, non-covering identity, coverage") {
  SemanticRecord record = plane_record(Vec3(4, 4, 2));
  const BoundaryInfo boundary = record.boundary_holes();
  OccupancyGrid grid = all_free_grid(Vec3(8, 8, 4));
  RobotBody body;
  MotionModel motion;
  HolePlannerParams params;
  params.d_v_max = 3.0;
  params.visibility_slack = grid.voxel_size();
  PlanGraph hole_graph;
  hole_graph.add_vertex(Configuration(1.0, 1.0, 2.0, 0.0));
  Rng rng(77);
  const auto candidates = calculate_viewpoints(record.mesh(), boundary, grid, hole_graph, body,
                                               lidar(), motion, grid.bounds(), params, rng);
  REQUIRE(candidates.size() >= 3);

  const auto reduced = reduce_viewpoints(candidates, record.mesh(), boundary, params);
  CHECK(reduced.size() <= candidates.size());
  CHECK_FALSE(reduced.empty());

  // Coverage preservation: every candidate's target edge is covered by some
  // selected viewpoint under the same distance/angle test.
  for (const HoleViewpoint& c : candidates) {
    const BoundaryEdge& e = boundary.edges[c.edge];
    const Vec3 outward = boundary_outward_direction(record.mesh(), e);
    bool covered = false;
    for (const HoleViewpoint& s : reduced) {
      const Vec3 to_s = s.config.position - e.midpoint;
      if (to_s.norm() > params.d_v_max) continue;
      if (angle_between(outward, to_s) >= params.theta_v_max) continue;
      covered = true;
      break;
    }
    CHECK(covered);
  }

  SUBCASE("pairwise non-covering viewpoints pass through unchanged") {
    // Synthetic: two viewpoints on opposite sides, targets far apart.
    TriangleMesh mesh;
    mesh.vertices = {Vec3(0, 0, 0), Vec3(0.2, 0, 0), Vec3(0, 0.2, 0),
                     Vec3(10, 0, 0), Vec3(10.2, 0, 0), Vec3(10, 0.2, 0)};
    mesh.faces.push_back({{0, 1, 2}});
    mesh.faces.push_back({{3, 4, 5}});
    mesh.rebuild_adjacency();
    const BoundaryInfo b2 = extract_boundary_edges(mesh);
    REQUIRE(b2.edges.size() == 6);
    std::vector<HoleViewpoint> vps;
    HoleViewpoint v1;
    v1.config = Configuration(0.1, 0.1, 1.0, 0);
    v1.edge = 0;
    v1.viewing_angle = 0.3;
    HoleViewpoint v2;
    v2.config = Configuration(10.1, 0.1, 1.0, 0);
    for (std::size_t i = 0; i < b2.edges.size(); ++i)
      if (b2.edges[i].midpoint.x() > 5) v2.edge = static_cast<int>(i);
    v2.viewing_angle = 0.3;
    vps = {v1, v2};
    HolePlannerParams p2;
    p2.d_v_max = 2.0;
    CHECK(reduce_viewpoints(vps, mesh, b2, p2).size() == 2);
  }
}

TEST_CASE("hole coverage drains the queue and closes open patches") {
  // A half-observed box in a free room: coverage flights must finish it.
  SemanticModelParams mp = model_params();
  std::map<int, SemanticRecord> records;
  auto& record = records.emplace(1, SemanticRecord(1, mp)).first->second;
  const AxisBox box{Vec3(3.513, 3.497, 1.479), Vec3(4.513, 4.497, 2.479)};
  testing::observe_box_from(record, box, 0.05, Vec3(1.0, 1.0, 2.0));
  record.rebuild_mesh();
  REQUIRE_FALSE(record.boundary_holes().edges.empty());

  OccupancyGrid grid = all_free_grid(Vec3(8, 8, 4));
  RobotBody body;
  MotionModel motion;
  HolePlannerParams params;
  params.d_v_max = 3.0;
  params.samples_per_edge = 48;
  params.visibility_slack = grid.voxel_size();

  PlanGraph hole_graph;
  hole_graph.add_vertex(Configuration(1.0, 1.0, 2.0, 0.0));
  Configuration robot(1.0, 1.0, 2.0, 0.0);

  // Execution hook: re-observe the box from each viewpoint pose.
  HoleCoverageHooks hooks;
  double time_spent = 0.0;
  int executions = 0;
  hooks.execute_path = [&](std::span<const Configuration> path) {
    REQUIRE_FALSE(path.empty());
    testing::observe_box_from(record, box, 0.05, path.back().position);
    ++executions;
    const double t = motion.path_time(path);
    time_spent += t;
    return t;
  };
  hooks.update_mesh = [&](int id) { records.at(id).rebuild_mesh(); };
  hooks.new_semantics_with_holes = [&]() { return std::vector<int>{}; };

  Rng rng(31337);
  const HoleCoverageResult result =
      run_hole_coverage(records, {1}, grid, hole_graph, robot, body, lidar(), motion,
                        grid.bounds(), params, 240.0, hooks, rng);

  CHECK(result.processed == std::vector<int>{1});
  CHECK(executions >= 1);
  CHECK(record.boundary_holes().edges.empty());  // closure
  // Trace rows are well-formed and edges shrink overall.
  REQUIRE_FALSE(result.trace.empty());
  CHECK(result.trace.front().edges_before > result.trace.back().edges_after);
  for (const auto& row : result.trace) {
    CHECK(row.semantic == 1);
    CHECK(row.viewing_angle < params.theta_v_max);
  }
}

TEST_CASE("hole coverage respects the per-semantic budget") {
  SemanticModelParams mp = model_params();
  std::map<int, SemanticRecord> records;
  auto& record = records.emplace(1, SemanticRecord(1, mp)).first->second;
  const AxisBox box{Vec3(3.513, 3.497, 1.479), Vec3(4.513, 4.497, 2.479)};
  testing::observe_box_from(record, box, 0.05, Vec3(1.0, 1.0, 2.0));
  record.rebuild_mesh();

  OccupancyGrid grid = all_free_grid(Vec3(8, 8, 4));
  RobotBody body;
  MotionModel motion;
  HolePlannerParams params;
  params.d_v_max = 3.0;
  params.samples_per_edge = 32;
  params.visibility_slack = grid.voxel_size();
  PlanGraph hole_graph;
  hole_graph.add_vertex(Configuration(1.0, 1.0, 2.0, 0.0));
  Configuration robot(1.0, 1.0, 2.0, 0.0);

  HoleCoverageHooks hooks;
  double longest = 0.0;
  hooks.execute_path = [&](std::span<const Configuration> path) {
    const double t = motion.path_time(path);
    longest = std::max(longest, t);
    return t;  // no new observations: holes persist, budget must stop us
  };
  hooks.update_mesh = [&](int id) { records.at(id).rebuild_mesh(); };
  hooks.new_semantics_with_holes = [&]() { return std::vector<int>{}; };

  Rng rng(99);
  const double t_hc = 12.0;
  const HoleCoverageResult result =
      run_hole_coverage(records, {1}, grid, hole_graph, robot, body, lidar(), motion,
                        grid.bounds(), params, t_hc, hooks, rng);
  CHECK(result.processed == std::vector<int>{1});
  CHECK(record.hole_budget_used <= t_hc + longest + 1e-9);
  CHECK(record.hole_budget_used > 0.0);
}

TEST_CASE("a semantic with no holes above threshold executes zero viewpoints") {
  SemanticModelParams mp = model_params();
  std::map<int, SemanticRecord> records;
  auto& record = records.emplace(1, SemanticRecord(1, mp)).first->second;
  const AxisBox box{Vec3(3.513, 3.497, 1.479), Vec3(4.513, 4.497, 2.479)};
  testing::observe_box_all_around(record, box, 0.05, 2.0);
  record.rebuild_mesh();
  REQUIRE(record.boundary_holes().edges.empty());

  OccupancyGrid grid = all_free_grid(Vec3(8, 8, 4));
  RobotBody body;
  MotionModel motion;
  PlanGraph hole_graph;
  hole_graph.add_vertex(Configuration(1.0, 1.0, 2.0, 0.0));
  Configuration robot(1.0, 1.0, 2.0, 0.0);

  HoleCoverageHooks hooks;
  int executions = 0;
  hooks.execute_path = [&](std::span<const Configuration>) {
    ++executions;
    return 1.0;
  };
  hooks.update_mesh = [&](int id) { records.at(id).rebuild_mesh(); };
  hooks.new_semantics_with_holes = [&]() { return std::vector<int>{}; };

  Rng rng(5);
  HolePlannerParams params;
  params.visibility_slack = grid.voxel_size();
  const auto result = run_hole_coverage(records, {1}, grid, hole_graph, robot, body, lidar(),
                                        motion, grid.bounds(), params, 60.0, hooks, rng);
  CHECK(executions == 0);
  CHECK(result.processed == std::vector<int>{1});
  CHECK(result.trace.empty());
}

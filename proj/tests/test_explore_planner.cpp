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

#include "semcover/explore_planner.hpp"

#include <cmath>

#include <doctest.h>

using namespace semcover;

namespace {

OccupancyGrid half_known_grid() {
  // Free up to x = 4 m, unknown beyond: the frontier is a plane.
  OccupancyGrid grid(Vec3::Zero(), 0.4, {25, 20, 10});
  const auto& d = grid.dims();
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x)
        if (x < 10) grid.set_state({x, y, z}, VoxelState::Free);
  return grid;
}

DepthSensor default_depth() {
  DepthSensor s;
  s.frustum.fov_h_deg = 360;
  s.frustum.fov_v_deg = 90;
  s.frustum.max_range = 6;
  return s;
}

CameraSensor default_camera() {
  CameraSensor c;
  c.frustum.fov_h_deg = 120;
  c.frustum.fov_v_deg = 110;
  c.frustum.max_range = 5;
  c.frustum.width = 960;
  c.frustum.height = 800;
  return c;
}

}  // namespace

TEST_CASE("discounted selection: positivity, distance preference, brute-force argmax") {
  SUBCASE("single positive-gain vertex wins") {
    const auto best = select_best_vertex({0.0, 12.0, 0.0}, {0.0, 3.0, 1.0}, 0.25);
    REQUIRE(best.has_value());
    CHECK(*best == 1);
  }
  SUBCASE("equal gains: nearer vertex wins for any positive discount") {
    for (const double discount : {0.01, 0.25, 2.0}) {
      const auto best = select_best_vertex({0.0, 5.0, 5.0}, {0.0, 7.0, 2.0}, discount);
      REQUIRE(best.has_value());
      CHECK(*best == 2);
    }
  }
  SUBCASE("all zero gains signal relocation") {
    CHECK_FALSE(select_best_vertex({0.0, 0.0, 0.0}, {0.0, 1.0, 2.0}, 0.25).has_value());
  }
  SUBCASE("matches exhaustive scoring on random instances") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> gains(20), times(20);
      for (int i = 0; i < 20; ++i) {
        gains[i] = rng.uniform() < 0.3 ? 0.0 : std::floor(rng.uniform(0, 50));
        times[i] = rng.uniform(0.1, 30.0);
      }
      const auto got = select_best_vertex(gains, times, 0.25);
      int want = -1;
      double want_score = 0.0;
      for (int i = 0; i < 20; ++i) {
        const double s = gains[i] * std::exp(-0.25 * times[i]);
        if (gains[i] > 0.0 && s > want_score) {
          want_score = s;
          want = i;
        }
      }
      if (want < 0)
        CHECK_FALSE(got.has_value());
      else
        CHECK(*got == want);
    }
  }
  SUBCASE("argmax invariant under positive gain rescaling") {
    Rng rng(18);
    std::vector<double> gains(15), times(15);
    for (int i = 0; i < 15; ++i) {
      gains[i] = std::floor(rng.uniform(0, 40));
      times[i] = rng.uniform(0.1, 20.0);
    }
    const auto base = select_best_vertex(gains, times, 0.25);
    for (const double scale : {0.001, 3.0, 1e4}) {
      std::vector<double> scaled = gains;
      for (double& g : scaled) g *= scale;
      CHECK(select_best_vertex(scaled, times, 0.25) == base);
    }
  }
}

TEST_CASE("exploration step drives towards the frontier and its path rechecks clean") {
  OccupancyGrid grid = half_known_grid();
  RobotBody body;
  MotionModel motion;
  ExploreParams params;
  params.local_box_extent = Vec3(12, 12, 6);
  params.graph.samples = 120;
  params.graph.connection_radius = 2.0;
  Rng rng(2718);

  const Configuration start(1.0, 4.0, 2.0, 0.0);
  const PlanGraph local =
      build_local_graph(grid, start, grid.bounds(), body, motion, params, rng);
  const auto plan = plan_exploration_step(local, grid, GainMode::Volumetric, default_depth(),
                                          default_camera(), params.gain_discount, 1);
  REQUIRE(plan.has_value());
  CHECK(plan->gain > 0.0);
  REQUIRE(plan->path.size() >= 2);
  CHECK((plan->path.front().position - start.position).norm() < 1e-9);
  // The best vertex looks over the frontier: farther along +x than the start.
  CHECK(plan->path.back().position.x() > start.position.x());
  for (std::size_t i = 1; i < plan->path.size(); ++i)
    CHECK(grid.is_path_collision_free(plan->path[i - 1], plan->path[i], body));
}

TEST_CASE("fully mapped space yields no exploration step") {
  OccupancyGrid grid(Vec3::Zero(), 0.4, {15, 15, 8});
  const auto& d = grid.dims();
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) grid.set_state({x, y, z}, VoxelState::Free);
  RobotBody body;
  MotionModel motion;
  ExploreParams params;
  params.graph.samples = 60;
  params.graph.connection_radius = 2.0;
  Rng rng(3);
  const PlanGraph local = build_local_graph(grid, Configuration(3, 3, 1.5, 0), grid.bounds(),
                                            body, motion, params, rng);
  CHECK_FALSE(plan_exploration_step(local, grid, GainMode::Volumetric, default_depth(),
                                    default_camera(), 0.25, 1)
                  .has_value());
}

TEST_CASE("global graph sparsification: spacing, idempotence, connectivity") {
  OccupancyGrid grid(Vec3::Zero(), 0.4, {40, 10, 10});
  const auto& d = grid.dims();
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) grid.set_state({x, y, z}, VoxelState::Free);
  RobotBody body;
  MotionModel motion;

  // Straight 10 m path sampled every 0.25 m.
  std::vector<Configuration> path;
  for (double x = 1.0; x <= 11.0 + 1e-9; x += 0.25) path.emplace_back(x, 2.0, 2.0, 0.0);

  PlanGraph global;
  update_global_graph(global, path, grid, body, motion, 1.0);
  CHECK(global.size() >= 9);
  CHECK(global.size() <= 11);

  // Re-adding the identical path changes nothing.
  const int before = global.size();
  update_global_graph(global, path, grid, body, motion, 1.0);
  CHECK(global.size() == before);

  // The chain is connected end to end.
  const auto sp = global.shortest_paths(0);
  for (int v = 0; v < global.size(); ++v) CHECK(std::isfinite(sp.dist[v]));
}

TEST_CASE("relocation: argmax over global vertices, none at saturation") {
  OccupancyGrid grid = half_known_grid();
  RobotBody body;
  MotionModel motion;
  ExploreParams params;

  // A global graph spanning the free half.
  std::vector<Configuration> path;
  for (double x = 1.0; x <= 3.4 + 1e-9; x += 0.4) path.emplace_back(x, 4.0, 2.0, 0.0);
  PlanGraph global;
  update_global_graph(global, path, grid, body, motion, params.sparsify_radius);
  REQUIRE(global.size() >= 2);

  SUBCASE("positive frontier gain yields a path ending at the best vertex") {
    const int global_n = global.size();
    const auto plan = relocate_to_frontier(global, grid, Configuration(1.0, 4.0, 2.0, 0),
                                           GainMode::Volumetric, default_depth(),
                                           default_camera(), body, motion, params, 1);
    REQUIRE(plan.has_value());
    CHECK(plan->gain > 0.0);
    REQUIRE_FALSE(plan->path.empty());

    // Exhaustive check of the discounted argmax over the original vertices.
    const auto sp = global.shortest_paths(global.size() - 1);  // robot joined last
    double best_score = 0.0;
    int best = -1;
    for (int v = 0; v < global_n; ++v) {
      const double g = grid.volumetric_gain(global.config(v), default_depth().frustum);
      const double s = g * std::exp(-params.gain_discount * sp.dist[v]);
      if (g > 0 && s > best_score) {
        best_score = s;
        best = v;
      }
    }
    REQUIRE(best >= 0);
    CHECK((plan->path.back().position - global.config(best).position).norm() < 1e-9);
  }

  SUBCASE("zero gain everywhere reports mission-complete") {
    OccupancyGrid done(Vec3::Zero(), 0.4, {25, 20, 10});
    const auto& d = done.dims();
    for (int z = 0; z < d[2]; ++z)
      for (int y = 0; y < d[1]; ++y)
        for (int x = 0; x < d[0]; ++x) done.set_state({x, y, z}, VoxelState::Free);
    CHECK_FALSE(relocate_to_frontier(global, done, Configuration(1.0, 4.0, 2.0, 0),
                                     GainMode::Volumetric, default_depth(), default_camera(),
                                     body, motion, params, 1)
                    .has_value());
  }
}

TEST_CASE("surface mode uses the camera objective") {
  // All free except one unseen occupied voxel beside free space.
  OccupancyGrid grid(Vec3::Zero(), 0.4, {15, 15, 8});
  const auto& d = grid.dims();
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) grid.set_state({x, y, z}, VoxelState::Free);
  grid.set_state({10, 7, 4}, VoxelState::Occupied);

  const Configuration away(2.0, 2.8, 1.6, -2.5);
  CHECK(evaluate_gain(grid, away, GainMode::Volumetric, default_depth(), default_camera()) == 0);
  const Configuration facing(2.0, 2.8, 1.6,
                             std::atan2(7 * 0.4 + 0.2 - 2.8, 10 * 0.4 + 0.2 - 2.0));
  CHECK(evaluate_gain(grid, facing, GainMode::Surface, default_depth(), default_camera()) == 1);
}

TEST_CASE("gain evaluation is identical across thread counts") {
  OccupancyGrid grid = half_known_grid();
  RobotBody body;
  MotionModel motion;
  ExploreParams params;
  params.graph.samples = 80;
  params.graph.connection_radius = 2.0;

  Rng rng_a(99), rng_b(99);
  const Configuration start(1.0, 4.0, 2.0, 0.0);
  const PlanGraph la = build_local_graph(grid, start, grid.bounds(), body, motion, params, rng_a);
  const PlanGraph lb = build_local_graph(grid, start, grid.bounds(), body, motion, params, rng_b);
  const auto p1 = plan_exploration_step(la, grid, GainMode::Volumetric, default_depth(),
                                        default_camera(), 0.25, 1);
  const auto p4 = plan_exploration_step(lb, grid, GainMode::Volumetric, default_depth(),
                                        default_camera(), 0.25, 4);
  REQUIRE(p1.has_value());
  REQUIRE(p4.has_value());
  CHECK(p1->target_vertex == p4->target_vertex);
  CHECK(p1->score == p4->score);
  REQUIRE(p1->path.size() == p4->path.size());
  for (std::size_t i = 0; i < p1->path.size(); ++i)
    CHECK((p1->path[i].position - p4->path[i].position).norm() == 0.0);
}

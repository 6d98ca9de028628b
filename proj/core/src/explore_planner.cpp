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

#include <algorithm>
#include <cmath>

#include "semcover/parallel.hpp"

namespace semcover {

int evaluate_gain(const OccupancyGrid& grid, const Configuration& xi, GainMode mode,
                  const DepthSensor& depth, const CameraSensor& camera) {
  if (mode == GainMode::Volumetric)
    return grid.volumetric_gain(xi, depth.frustum, depth.mount);
  return grid.surface_gain(xi, camera.frustum, camera.mount);
}

std::optional<int> select_best_vertex(const std::vector<double>& gains,
                                      const std::vector<double>& times, double discount) {
  int best = -1;
  double best_score = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (gains[i] <= 0.0 || !std::isfinite(times[i])) continue;
    const double score = gains[i] * std::exp(-discount * times[i]);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

PlanGraph build_local_graph(const OccupancyGrid& grid, const Configuration& xi_curr,
                            const AxisBox& world_bounds, const RobotBody& body,
                            const MotionModel& motion, const ExploreParams& params, Rng& rng) {
  AxisBox local;
  local.min = xi_curr.position - 0.5 * params.local_box_extent;
  local.max = xi_curr.position + 0.5 * params.local_box_extent;
  return build_sampled_graph(grid, xi_curr, local.intersection(world_bounds), body, motion,
                             params.graph, rng);
}

namespace {

std::vector<double> graph_gains(const PlanGraph& graph, const OccupancyGrid& grid, GainMode mode,
                                const DepthSensor& depth, const CameraSensor& camera,
                                int threads, bool skip_root) {
  std::vector<double> gains(graph.size(), 0.0);
  parallel_for(graph.size(), threads, [&](int i) {
    if (skip_root && i == 0) return;
    gains[i] = evaluate_gain(grid, graph.config(i), mode, depth, camera);
  });
  return gains;
}

}  // namespace

std::optional<ExplorationPlan> plan_exploration_step(const PlanGraph& local,
                                                     const OccupancyGrid& grid, GainMode mode,
                                                     const DepthSensor& depth,
                                                     const CameraSensor& camera,
                                                     double gain_discount, int threads) {
  if (local.empty()) return std::nullopt;
  const std::vector<double> gains = graph_gains(local, grid, mode, depth, camera, threads,
                                                /*skip_root=*/true);
  const PlanGraph::ShortestPaths sp = local.shortest_paths(0);
  const std::optional<int> best = select_best_vertex(gains, sp.dist, gain_discount);
  if (!best) return std::nullopt;

  ExplorationPlan plan;
  plan.target_vertex = *best;
  plan.gain = gains[*best];
  plan.score = gains[*best] * std::exp(-gain_discount * sp.dist[*best]);
  plan.path = local.configs_along(local.extract_path(sp, *best));
  return plan;
}

void update_global_graph(PlanGraph& global, std::span<const Configuration> executed,
                         const OccupancyGrid& grid, const RobotBody& body,
                         const MotionModel& motion, double sparsify_radius) {
  int anchor = -1;
  for (const Configuration& c : executed) {
    // Merge into an existing vertex when one is close enough.
    int representative = -1;
    const int nearest = global.nearest_vertex(c.position);
    if (nearest >= 0 &&
        (global.config(nearest).position - c.position).norm() <= sparsify_radius)
      representative = nearest;

    if (representative < 0) {
      representative = global.add_vertex(c);
      if (anchor >= 0 && anchor != representative &&
          grid.is_path_collision_free(global.config(anchor), c, body))
        global.add_edge(anchor, representative, motion.segment_time(global.config(anchor), c));
    } else if (anchor >= 0 && anchor != representative &&
               !global.has_edge(anchor, representative)) {
      if (grid.is_path_collision_free(global.config(anchor), global.config(representative), body))
        global.add_edge(anchor, representative,
                        motion.segment_time(global.config(anchor), global.config(representative)));
    }
    anchor = representative;
  }
}

std::optional<ExplorationPlan> relocate_to_frontier(PlanGraph& global, const OccupancyGrid& grid,
                                                    const Configuration& xi_curr, GainMode mode,
                                                    const DepthSensor& depth,
                                                    const CameraSensor& camera,
                                                    const RobotBody& body,
                                                    const MotionModel& motion,
                                                    const ExploreParams& params, int threads) {
  if (global.empty()) return std::nullopt;

  const std::vector<double> gains =
      graph_gains(global, grid, mode, depth, camera, threads, /*skip_root=*/false);
  if (std::all_of(gains.begin(), gains.end(), [](double g) { return g <= 0.0; }))
    return std::nullopt;

  const std::optional<int> source = try_connect(global, xi_curr, grid, body, motion,
                                                params.global_connect_radius,
                                                params.global_connect_neighbors);
  if (!source) return std::nullopt;

  std::vector<double> gains_ext = gains;
  gains_ext.resize(global.size(), 0.0);
  gains_ext[*source] = 0.0;  // standing still is not a relocation
  const PlanGraph::ShortestPaths sp = global.shortest_paths(*source);
  const std::optional<int> best = select_best_vertex(gains_ext, sp.dist, params.gain_discount);
  if (!best) return std::nullopt;

  ExplorationPlan plan;
  plan.target_vertex = *best;
  plan.gain = gains_ext[*best];
  plan.score = gains_ext[*best] * std::exp(-params.gain_discount * sp.dist[*best]);
  plan.path = global.configs_along(global.extract_path(sp, *best));
  if (plan.path.size() < 2) return std::nullopt;
  return plan;
}

}  // namespace semcover

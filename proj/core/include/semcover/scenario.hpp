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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "semcover/explore_planner.hpp"
#include "semcover/hole_planner.hpp"
#include "semcover/inspect_planner.hpp"
#include "semcover/sim_world.hpp"

namespace semcover {

// Parse or validation failure with a location (line/column for syntax
// errors, key path for schema errors).
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioBox {
  AxisBox box;
  double yaw_deg = 0.0;
  int label = 0;
};

// Fully resolved run configuration. Field names match the scenario file
// schema documented in the README; unknown keys are rejected at load.
struct Scenario {
  std::string name = "unnamed";

  AxisBox bounds;
  bool shell = true;  // enclose the volume in wall/floor/ceiling geometry
  std::vector<ScenarioBox> boxes;
  std::vector<WorldTriangle> extra_triangles;

  Configuration start;
  RobotBody body;
  MotionModel motion;

  DepthSensor depth;
  CameraSensor camera;

  double voxel_size = 0.4;
  double subsample_cell = 0.2;
  double mesh_cell = 0.2;
  double truncation = 0.4;
  double hole_perimeter_min = 1.2;

  double r_min_px_cm2 = 0.86;
  double theta_i_max_deg = 45.0;
  double theta_h_max_deg = 75.0;
  int k_candidates = 3;
  double eta_percent = 20.0;
  double t_e = 20.0;
  double t_hc = 120.0;
  double d_v_max = 4.0;
  int samples_per_edge = 64;
  Vec3 local_box = Vec3(20.0, 20.0, 6.0);
  int local_samples = 300;
  int local_neighbors = 5;
  double connection_radius = 1.5;
  double sparsify_radius = 1.5;
  double gain_discount = 0.25;
  int inspect_samples = 400;
  double hole_connect_radius = 3.0;

  double sensor_period = 1.0;
  double time_budget = 600.0;
  double wall_clock_cap = 600.0;
  std::uint64_t seed = 7;
  bool residual_audit = false;

  World build_world() const;
  SemanticModelParams semantic_params() const;
  ExploreParams explore_params() const;
  HolePlannerParams hole_params() const;
  InspectParams inspect_params() const;
  double l_max() const;  // from r_min and the camera model

  // Full resolved-parameter dump for the run manifest.
  std::string to_json_string() const;
};

Scenario load_scenario(const std::filesystem::path& file);
Scenario parse_scenario(const std::string& text);

}  // namespace semcover

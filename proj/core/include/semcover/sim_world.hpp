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
#include <span>
#include <vector>

#include "semcover/geometry.hpp"
#include "semcover/semantic_model.hpp"
#include "semcover/voxel_grid.hpp"

namespace semcover {

// One world triangle; label 0 is plain structure, labels 1..N are the
// semantics of interest.
struct WorldTriangle {
  Vec3 a, b, c;
  int label = 0;
};

// Ground-truth scene: labeled triangle soup inside axis-aligned bounds.
class World {
 public:
  World(const AxisBox& bounds, std::vector<WorldTriangle> triangles);

  const AxisBox& bounds() const { return bounds_; }
  const std::vector<WorldTriangle>& triangles() const { return triangles_; }

  // Sorted distinct semantic labels (> 0) present in the scene.
  const std::vector<int>& semantic_labels() const { return labels_; }
  double semantic_area(int label) const;
  double total_semantic_area() const;

  // Closest triangle hit along the ray within max_range. Returns false on a
  // miss. `skip_near` ignores hits closer than that distance.
  bool raycast(const Vec3& origin, const Vec3& dir, double max_range, double* hit_distance,
               int* hit_triangle, double skip_near = 0.0) const;

  // True iff the open segment from `from` to `to` is blocked by scene
  // geometry more than `slack` before reaching `to`.
  bool segment_blocked(const Vec3& from, const Vec3& to, double slack) const;

 private:
  AxisBox bounds_;
  std::vector<WorldTriangle> triangles_;
  std::vector<int> labels_;
  std::map<int, double> area_by_label_;
};

// Appends the 12 triangles of an axis-aligned box, outward-facing.
void append_box(std::vector<WorldTriangle>& out, const AxisBox& box, int label);
// Same, with the box rotated about its center (rotation applied to corners).
void append_box(std::vector<WorldTriangle>& out, const AxisBox& box, const Mat3& rotation,
                int label);
// Appends the four walls, floor and ceiling of a room seen from inside.
void append_room_shell(std::vector<WorldTriangle>& out, const AxisBox& room, int label);

// Depth sensor return set for one pose (ray per angular cell).
struct DepthScan {
  std::vector<DepthHit> hits;       // endpoints (surface or max-range)
  std::vector<int> labels;          // label per hit; -1 for max-range rays
};

struct DepthSensor {
  FrustumModel frustum;
  Mat3 mount = Mat3::Identity();
  double res_h_deg = 1.0;
  double res_v_deg = 1.0;
};

struct CameraSensor {
  FrustumModel frustum;
  Mat3 mount = Mat3::Identity();
};

// Renders a segmented depth scan: one ray per angular cell (cell-centered),
// each returning the closest labeled surface or a max-range marker.
DepthScan render_depth(const World& world, const Configuration& pose, const DepthSensor& sensor);

// Reports every face of every record's mesh whose centroid is inside the
// camera frustum and not blocked by world geometry, with viewing distance
// and angle attached. `occlusion_slack` ignores blockers within that
// distance of the centroid (the face's own supporting surface). Quality
// thresholds are not applied here.
std::vector<CameraFaceObs> render_camera_observation(
    const World& world, const std::map<int, SemanticRecord>& records, const Configuration& pose,
    const CameraSensor& camera, double occlusion_slack);

struct SensorEvent {
  double t = 0.0;  // seconds since path start
  Configuration pose;
};

// Kinematic executor: piecewise-linear motion through the waypoints under
// the shared cost model, emitting sensor events every `period` seconds plus
// one at every waypoint. Returns the events (strictly increasing t) and the
// total elapsed time. Throws std::invalid_argument on an empty path.
struct ExecutionResult {
  std::vector<SensorEvent> events;
  double elapsed = 0.0;
};
ExecutionResult execute_path(std::span<const Configuration> path, const MotionModel& motion,
                             double period);

}  // namespace semcover

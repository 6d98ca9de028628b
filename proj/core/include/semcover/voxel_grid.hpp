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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "semcover/geometry.hpp"

namespace semcover {

enum class VoxelState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

// Axis-aligned collision box of the robot (full side lengths, meters).
struct RobotBody {
  Vec3 size = Vec3(0.38, 0.38, 0.24);
};

struct GridIndex {
  int x = 0, y = 0, z = 0;
  bool operator==(const GridIndex&) const = default;
};

// One depth return: ray endpoint plus whether a surface was hit there
// (false = the ray reached max range without hitting anything).
struct DepthHit {
  Vec3 point = Vec3::Zero();
  bool is_surface = false;
};

// Dense three-state occupancy map over a fixed axis-aligned region, with a
// per-voxel "seen by the camera" flag.
//
// Conventions, shared with every oracle that rechecks this class:
//  - A point p maps to voxel floor((p - origin) / voxel_size), indices
//    clamped into bounds when p lies exactly on the outer boundary.
//  - A ray "traverses" exactly the voxels in which the open segment has a
//    positive-length chord; the endpoint voxel is handled separately.
//  - Occlusion means a positive-chord Occupied voxel strictly before the
//    target voxel. Unknown space does not occlude.
//  - Collision treats Unknown as blocked.
class OccupancyGrid {
 public:
  OccupancyGrid(const Vec3& origin, double voxel_size, const std::array<int, 3>& dims);

  // Grid whose voxels cover [min, max] (dims rounded up).
  static OccupancyGrid covering(const AxisBox& bounds, double voxel_size);

  double voxel_size() const { return voxel_size_; }
  const Vec3& origin() const { return origin_; }
  const std::array<int, 3>& dims() const { return dims_; }
  std::size_t voxel_count() const { return states_.size(); }
  AxisBox bounds() const;

  bool in_bounds(const GridIndex& i) const {
    return i.x >= 0 && i.y >= 0 && i.z >= 0 && i.x < dims_[0] && i.y < dims_[1] &&
           i.z < dims_[2];
  }
  bool in_bounds(const Vec3& p) const { return bounds().contains(p); }

  GridIndex index_of(const Vec3& p) const;           // clamped into bounds
  Vec3 center_of(const GridIndex& i) const;
  std::size_t flat(const GridIndex& i) const {
    return static_cast<std::size_t>((i.z * dims_[1] + i.y) * dims_[0] + i.x);
  }

  VoxelState state(const GridIndex& i) const { return states_[flat(i)]; }
  bool camera_seen(const GridIndex& i) const { return camera_seen_[flat(i)] != 0; }
  void set_state(const GridIndex& i, VoxelState s) { states_[flat(i)] = s; }

  std::size_t count(VoxelState s) const;
  double mapped_volume() const;  // (Free + Occupied) voxels * voxel volume

  // Integrates one depth scan: voxels traversed by each ray become Free, the
  // endpoint voxel becomes Occupied when the hit is a surface (Free
  // otherwise). The endpoint voxel is taken 1e-6 m past the hit along the
  // ray, so returns from voxel faces claim the material side. Later writes
  // win. Endpoints outside the grid are clipped and mark traversal only.
  void integrate_depth_scan(const Configuration& sensor_pose, std::span<const DepthHit> hits);

  // Flags every already-mapped voxel whose center is inside the camera
  // frustum and not occluded.
  void mark_camera_seen(const Configuration& pose, const FrustumModel& camera,
                        const Mat3& mount = Mat3::Identity());

  // True iff the body box, swept along segment ab at spacing <= voxel/2,
  // overlaps only Free voxels. Placements poking outside the grid fail.
  bool is_path_collision_free(const Configuration& a, const Configuration& b,
                              const RobotBody& body) const;
  bool is_position_collision_free(const Vec3& p, const RobotBody& body) const;

  // Number of Unknown voxels whose center lies in the depth frustum and is
  // not occluded.
  int volumetric_gain(const Configuration& xi, const FrustumModel& depth,
                      const Mat3& mount = Mat3::Identity()) const;

  // Number of visible unseen surface voxels: Unknown, or Occupied and not
  // camera-seen, in both cases 6-adjacent to a Free voxel.
  int surface_gain(const Configuration& xi, const FrustumModel& camera,
                   const Mat3& mount = Mat3::Identity()) const;

  bool is_unseen_surface_voxel(const GridIndex& i) const;

  // True iff an Occupied voxel with a positive chord lies on the open
  // segment strictly before the target voxel. Voxels whose center is within
  // `target_slack` of `to` are not treated as occluders.
  bool segment_occluded(const Vec3& from, const Vec3& to, double target_slack = 0.0,
                        bool unknown_blocks = false) const;

  // Voxels with a positive-length chord along the open segment, excluding
  // the voxel containing `to`; DDA order from `from`.
  std::vector<GridIndex> traversed_voxels(const Vec3& from, const Vec3& to) const;

  // Snapshot: little-endian header (magic "SCVG", u32 version, 3x u32 dims,
  // f64 origin xyz, f64 voxel size) followed by one byte per voxel in x-major
  // order: bits 0-1 state, bit 2 camera-seen.
  void save_snapshot(const std::filesystem::path& file) const;
  static OccupancyGrid load_snapshot(const std::filesystem::path& file);

 private:
  Vec3 origin_;
  double voxel_size_;
  std::array<int, 3> dims_;
  std::vector<VoxelState> states_;
  std::vector<std::uint8_t> camera_seen_;
};

}  // namespace semcover

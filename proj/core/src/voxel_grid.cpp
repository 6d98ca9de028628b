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

#include "semcover/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace semcover {

namespace {

constexpr char kSnapshotMagic[4] = {'S', 'C', 'V', 'G'};
constexpr std::uint32_t kSnapshotVersion = 1;

// Precomputed frustum membership test, identical in convention to
// in_frustum() but cheap enough for per-voxel loops.
struct FrustumTest {
  Mat3 world_to_sensor;
  Vec3 origin;
  double half_h_rad;
  double half_v_rad;
  double max_range_sq;
  bool full_azimuth;

  FrustumTest(const Configuration& pose, const FrustumModel& f, const Mat3& mount)
      : world_to_sensor((pose.rotation() * mount).transpose()),
        origin(pose.position),
        half_h_rad(0.5 * f.fov_h_deg * M_PI / 180.0),
        half_v_rad(0.5 * f.fov_v_deg * M_PI / 180.0),
        max_range_sq(f.max_range * f.max_range),
        full_azimuth(f.fov_h_deg >= 360.0) {}

  bool contains(const Vec3& p) const {
    const Vec3 s = world_to_sensor * (p - origin);
    const double r2 = s.squaredNorm();
    if (r2 > max_range_sq) return false;
    if (r2 < kGeomEps * kGeomEps) return true;
    if (!full_azimuth) {
      const double az = std::atan2(s.y(), s.x());
      if (std::abs(az) >= half_h_rad) return false;
    }
    const double el = std::atan2(s.z(), std::hypot(s.x(), s.y()));
    return std::abs(el) < half_v_rad;
  }
};

}  // namespace

OccupancyGrid::OccupancyGrid(const Vec3& origin, double voxel_size,
                             const std::array<int, 3>& dims)
    : origin_(origin), voxel_size_(voxel_size), dims_(dims) {
  if (!(voxel_size > 0.0)) throw std::invalid_argument("grid: voxel size must be positive");
  if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
    throw std::invalid_argument("grid: dimensions must be positive");
  const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  states_.assign(n, VoxelState::Unknown);
  camera_seen_.assign(n, 0);
}

OccupancyGrid OccupancyGrid::covering(const AxisBox& bounds, double voxel_size) {
  std::array<int, 3> dims;
  for (int a = 0; a < 3; ++a) {
    dims[a] = std::max(1, static_cast<int>(std::ceil((bounds.max(a) - bounds.min(a)) / voxel_size - 1e-9)));
  }
  return OccupancyGrid(bounds.min, voxel_size, dims);
}

AxisBox OccupancyGrid::bounds() const {
  AxisBox b;
  b.min = origin_;
  b.max = origin_ + voxel_size_ * Vec3(dims_[0], dims_[1], dims_[2]);
  return b;
}

GridIndex OccupancyGrid::index_of(const Vec3& p) const {
  GridIndex i;
  i.x = std::clamp(static_cast<int>(std::floor((p.x() - origin_.x()) / voxel_size_)), 0, dims_[0] - 1);
  i.y = std::clamp(static_cast<int>(std::floor((p.y() - origin_.y()) / voxel_size_)), 0, dims_[1] - 1);
  i.z = std::clamp(static_cast<int>(std::floor((p.z() - origin_.z()) / voxel_size_)), 0, dims_[2] - 1);
  return i;
}

Vec3 OccupancyGrid::center_of(const GridIndex& i) const {
  return origin_ + voxel_size_ * Vec3(i.x + 0.5, i.y + 0.5, i.z + 0.5);
}

std::size_t OccupancyGrid::count(VoxelState s) const {
  return static_cast<std::size_t>(std::count(states_.begin(), states_.end(), s));
}

double OccupancyGrid::mapped_volume() const {
  const double v = voxel_size_ * voxel_size_ * voxel_size_;
  return static_cast<double>(count(VoxelState::Free) + count(VoxelState::Occupied)) * v;
}

std::vector<GridIndex> OccupancyGrid::traversed_voxels(const Vec3& from, const Vec3& to) const {
  std::vector<GridIndex> out;
  const Vec3 d = to - from;
  const double len = d.norm();
  if (len < kGeomEps) return out;

  // Clip the segment parameter range to the grid box.
  double t0 = 0.0, t1 = 1.0;
  const AxisBox b = bounds();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d(a)) < 1e-15) {
      if (from(a) < b.min(a) || from(a) > b.max(a)) return out;
      continue;
    }
    double ta = (b.min(a) - from(a)) / d(a);
    double tb = (b.max(a) - from(a)) / d(a);
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 >= t1) return out;

  const Vec3 p0 = from + t0 * d;
  const Vec3 p1 = from + t1 * d;
  GridIndex cur = index_of(p0);
  const GridIndex end = index_of(p1);

  std::array<int, 3> step{};
  Vec3 t_max, t_delta;
  std::array<int, 3> c{cur.x, cur.y, cur.z};
  for (int a = 0; a < 3; ++a) {
    if (d(a) > 1e-15) {
      step[a] = 1;
      const double boundary = origin_(a) + voxel_size_ * (c[a] + 1);
      t_max(a) = (boundary - from(a)) / d(a);
      t_delta(a) = voxel_size_ / d(a);
    } else if (d(a) < -1e-15) {
      step[a] = -1;
      const double boundary = origin_(a) + voxel_size_ * c[a];
      t_max(a) = (boundary - from(a)) / d(a);
      t_delta(a) = -voxel_size_ / d(a);
    } else {
      step[a] = 0;
      t_max(a) = std::numeric_limits<double>::infinity();
      t_delta(a) = std::numeric_limits<double>::infinity();
    }
  }

  const int max_steps = dims_[0] + dims_[1] + dims_[2] + 3;
  for (int n = 0; n < max_steps; ++n) {
    if (cur == end) break;
    out.push_back(cur);
    int axis = 0;
    if (t_max(1) < t_max(axis)) axis = 1;
    if (t_max(2) < t_max(axis)) axis = 2;
    if (t_max(axis) > t1) break;  // no further boundary before the segment ends
    c[axis] += step[axis];
    if (c[axis] < 0 || c[axis] >= dims_[axis]) break;
    t_max(axis) += t_delta(axis);
    cur = GridIndex{c[0], c[1], c[2]};
  }
  return out;
}

void OccupancyGrid::integrate_depth_scan(const Configuration& sensor_pose,
                                         std::span<const DepthHit> hits) {
  const AxisBox b = bounds();
  for (const DepthHit& hit : hits) {
    Vec3 end = hit.point;
    bool endpoint_inside = b.contains(end);
    if (!endpoint_inside) {
      // Clip the ray at the grid boundary; the clipped endpoint is just
      // traversed space, not a surface.
      const Vec3 d = end - sensor_pose.position;
      double t_exit = 1.0;
      bool valid = true;
      for (int a = 0; a < 3; ++a) {
        if (std::abs(d(a)) < 1e-15) {
          if (sensor_pose.position(a) < b.min(a) || sensor_pose.position(a) > b.max(a)) valid = false;
          continue;
        }
        double ta = (b.min(a) - sensor_pose.position(a)) / d(a);
        double tb = (b.max(a) - sensor_pose.position(a)) / d(a);
        if (ta > tb) std::swap(ta, tb);
        t_exit = std::min(t_exit, tb);
      }
      if (!valid || t_exit <= 0.0) continue;
      end = sensor_pose.position + t_exit * d;
    }

    // Surfaces claim the voxel just past the hit along the ray, so a return
    // from a voxel face marks the material side, not the air side; traversal
    // then correctly frees the air voxel the hit point touches.
    const Vec3 ray = end - sensor_pose.position;
    const double len = ray.norm();
    const Vec3 nudged = len > kGeomEps ? Vec3(end + (1e-6 / len) * ray) : end;

    for (const GridIndex& v : traversed_voxels(sensor_pose.position, nudged))
      states_[flat(v)] = VoxelState::Free;

    const GridIndex ev = index_of(nudged);
    if (hit.is_surface && endpoint_inside) {
      states_[flat(ev)] = VoxelState::Occupied;
    } else {
      states_[flat(ev)] = VoxelState::Free;
    }
  }
}

void OccupancyGrid::mark_camera_seen(const Configuration& pose, const FrustumModel& camera,
                                     const Mat3& mount) {
  const FrustumTest test(pose, camera, mount);
  const GridIndex lo = index_of(pose.position - Vec3::Constant(camera.max_range));
  const GridIndex hi = index_of(pose.position + Vec3::Constant(camera.max_range));
  for (int z = lo.z; z <= hi.z; ++z)
    for (int y = lo.y; y <= hi.y; ++y)
      for (int x = lo.x; x <= hi.x; ++x) {
        const GridIndex i{x, y, z};
        const std::size_t f = flat(i);
        if (states_[f] == VoxelState::Unknown || camera_seen_[f]) continue;
        const Vec3 c = center_of(i);
        if (!test.contains(c)) continue;
        if (segment_occluded(pose.position, c)) continue;
        camera_seen_[f] = 1;
      }
}

bool OccupancyGrid::is_position_collision_free(const Vec3& p, const RobotBody& body) const {
  const Vec3 half = 0.5 * body.size;
  const Vec3 lo = p - half;
  const Vec3 hi = p + half;
  const AxisBox b = bounds();
  if (!b.contains(lo) || !b.contains(hi)) return false;

  // Shrink slightly so boxes that merely touch a voxel face do not count as
  // overlapping it.
  const double eps = 1e-9;
  GridIndex ilo = index_of(lo + Vec3::Constant(eps));
  GridIndex ihi = index_of(hi - Vec3::Constant(eps));
  for (int z = ilo.z; z <= ihi.z; ++z)
    for (int y = ilo.y; y <= ihi.y; ++y)
      for (int x = ilo.x; x <= ihi.x; ++x)
        if (state(GridIndex{x, y, z}) != VoxelState::Free) return false;
  return true;
}

bool OccupancyGrid::is_path_collision_free(const Configuration& a, const Configuration& b,
                                           const RobotBody& body) const {
  const double spacing = 0.5 * voxel_size_;
  const double len = (b.position - a.position).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  // Inflating by the sampling step keeps the swept volume inside the union
  // of the checked boxes, so acceptance implies zero non-free overlap.
  RobotBody swept = body;
  swept.size += Vec3::Constant(spacing);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const Vec3 p = a.position + t * (b.position - a.position);
    if (!is_position_collision_free(p, swept)) return false;
  }
  return true;
}

bool OccupancyGrid::segment_occluded(const Vec3& from, const Vec3& to, double target_slack,
                                     bool unknown_blocks) const {
  const double slack_sq = target_slack * target_slack;
  for (const GridIndex& v : traversed_voxels(from, to)) {
    const VoxelState s = states_[flat(v)];
    const bool blocking =
        s == VoxelState::Occupied || (unknown_blocks && s == VoxelState::Unknown);
    if (!blocking) continue;
    if (target_slack > 0.0 && (center_of(v) - to).squaredNorm() <= slack_sq) continue;
    return true;
  }
  return false;
}

bool OccupancyGrid::is_unseen_surface_voxel(const GridIndex& i) const {
  const VoxelState s = state(i);
  const bool candidate =
      s == VoxelState::Unknown || (s == VoxelState::Occupied && !camera_seen(i));
  if (!candidate) return false;
  static constexpr std::array<std::array<int, 3>, 6> kNeighbors = {
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  for (const auto& n : kNeighbors) {
    const GridIndex j{i.x + n[0], i.y + n[1], i.z + n[2]};
    if (in_bounds(j) && state(j) == VoxelState::Free) return true;
  }
  return false;
}

int OccupancyGrid::volumetric_gain(const Configuration& xi, const FrustumModel& depth,
                                   const Mat3& mount) const {
  const FrustumTest test(xi, depth, mount);
  const GridIndex lo = index_of(xi.position - Vec3::Constant(depth.max_range));
  const GridIndex hi = index_of(xi.position + Vec3::Constant(depth.max_range));
  int gain = 0;
  for (int z = lo.z; z <= hi.z; ++z)
    for (int y = lo.y; y <= hi.y; ++y)
      for (int x = lo.x; x <= hi.x; ++x) {
        const GridIndex i{x, y, z};
        if (state(i) != VoxelState::Unknown) continue;
        const Vec3 c = center_of(i);
        if (!test.contains(c)) continue;
        if (segment_occluded(xi.position, c)) continue;
        ++gain;
      }
  return gain;
}

int OccupancyGrid::surface_gain(const Configuration& xi, const FrustumModel& camera,
                                const Mat3& mount) const {
  const FrustumTest test(xi, camera, mount);
  const GridIndex lo = index_of(xi.position - Vec3::Constant(camera.max_range));
  const GridIndex hi = index_of(xi.position + Vec3::Constant(camera.max_range));
  int gain = 0;
  for (int z = lo.z; z <= hi.z; ++z)
    for (int y = lo.y; y <= hi.y; ++y)
      for (int x = lo.x; x <= hi.x; ++x) {
        const GridIndex i{x, y, z};
        if (!is_unseen_surface_voxel(i)) continue;
        const Vec3 c = center_of(i);
        if (!test.contains(c)) continue;
        if (segment_occluded(xi.position, c)) continue;
        ++gain;
      }
  return gain;
}

void OccupancyGrid::save_snapshot(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("grid snapshot: cannot open " + file.string());
  out.write(kSnapshotMagic, 4);
  auto write_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto write_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  write_u32(kSnapshotVersion);
  for (int a = 0; a < 3; ++a) write_u32(static_cast<std::uint32_t>(dims_[a]));
  for (int a = 0; a < 3; ++a) write_f64(origin_(a));
  write_f64(voxel_size_);
  std::vector<std::uint8_t> bytes(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i)
    bytes[i] = static_cast<std::uint8_t>(states_[i]) | (camera_seen_[i] ? 0x4 : 0x0);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

OccupancyGrid OccupancyGrid::load_snapshot(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("grid snapshot: cannot open " + file.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kSnapshotMagic, 4) != 0)
    throw std::runtime_error("grid snapshot: bad magic");
  auto read_u32 = [&] {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto read_f64 = [&] {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  const std::uint32_t version = read_u32();
  if (version != kSnapshotVersion) throw std::runtime_error("grid snapshot: unsupported version");
  std::array<int, 3> dims;
  for (int a = 0; a < 3; ++a) dims[a] = static_cast<int>(read_u32());
  Vec3 origin;
  for (int a = 0; a < 3; ++a) origin(a) = read_f64();
  const double voxel = read_f64();
  OccupancyGrid grid(origin, voxel, dims);
  std::vector<std::uint8_t> bytes(grid.voxel_count());
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw std::runtime_error("grid snapshot: truncated payload");
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    grid.states_[i] = static_cast<VoxelState>(bytes[i] & 0x3);
    grid.camera_seen_[i] = (bytes[i] & 0x4) ? 1 : 0;
  }
  return grid;
}

}  // namespace semcover

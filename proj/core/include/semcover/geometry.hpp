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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <span>

#include "semcover/rng.hpp"

namespace semcover {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Distance below which two points are treated as coincident.
inline constexpr double kGeomEps = 1e-9;

// Wraps an angle into (-pi, pi].
double normalize_yaw(double yaw);

// Shortest signed angular difference b - a, in (-pi, pi].
double angle_diff(double a, double b);

// Heading of the xy-projection of (to - from). Zero when the projection
// vanishes.
double yaw_towards(const Vec3& from, const Vec3& to);

// Robot / sensor configuration: position plus yaw.
struct Configuration {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;

  Configuration() = default;
  Configuration(double x, double y, double z, double psi)
      : position(x, y, z), yaw(normalize_yaw(psi)) {}
  Configuration(const Vec3& p, double psi) : position(p), yaw(normalize_yaw(psi)) {}

  // Body-to-world rotation (yaw about +z).
  Mat3 rotation() const;
};

// Axis-aligned box, used for world bounds and sampling regions.
struct AxisBox {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool contains(const Vec3& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y() && p.z() >= min.z() && p.z() <= max.z();
  }
  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }
  double volume() const {
    const Vec3 e = extent();
    return e.x() * e.y() * e.z();
  }
  AxisBox intersection(const AxisBox& other) const;
};

// Pyramidal sensing volume. Sensor frame convention: +x forward, +y left,
// +z up; azimuth about z, elevation from the horizontal plane.
struct FrustumModel {
  double fov_h_deg = 120.0;
  double fov_v_deg = 90.0;
  double max_range = 7.0;
  // Pixel counts for camera sensors; 0 means "no pixel model".
  int width = 0;
  int height = 0;

  bool has_pixels() const { return width > 0 && height > 0; }
  // Throws std::invalid_argument when outside the admissible ranges.
  void validate() const;
};

// Box with arbitrary orientation. rotation maps box frame to world frame;
// columns are the box axes.
struct OrientedBox {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  bool contains(const Vec3& p, double tol = 0.0) const;
  OrientedBox inflated(double margin) const;
};

// Triangle face of an indexed mesh.
struct Face {
  std::array<int, 3> v{-1, -1, -1};
  Vec3 centroid = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // unit, outward
  double area = 0.0;
};

// Kinematic cost model shared by the path executor and all planners: a
// segment takes max(translation time, yaw time).
struct MotionModel {
  double speed = 1.0;     // m/s
  double yaw_rate = 0.5;  // rad/s

  double segment_time(const Configuration& a, const Configuration& b) const;
  double path_time(std::span<const Configuration> path) const;
};

// Frustum membership for point p seen from a sensor at sensor_pose with the
// given sensor-to-body mount rotation. Angular limits are exclusive, the
// range limit inclusive. A horizontal FOV of 360° or more disables the
// azimuth check entirely (full panoramic sensor).
bool in_frustum(const Configuration& sensor_pose, const FrustumModel& frustum,
                const Mat3& mount, const Vec3& p);
bool in_frustum(const Configuration& sensor_pose, const FrustumModel& frustum,
                const Vec3& p);

// Angle in [0, pi] between two nonzero vectors.
double angle_between(const Vec3& a, const Vec3& b);

// Angle in [0, pi] between the vector from the face centroid to the
// viewpoint and the face's outward normal. Throws std::invalid_argument when
// the viewpoint coincides with the centroid (within kGeomEps).
double viewing_angle(const Vec3& centroid, const Vec3& outward_normal,
                     const Vec3& viewpoint);
double viewing_angle_to_face(const Face& f, const Configuration& xi);

// PCA-fitted oriented bounding box of a point set, inflated by margin on
// every axis. Axes are ordered by decreasing spread and form a right-handed
// basis with a deterministic sign convention. Throws std::invalid_argument
// for fewer than 3 points or a collinear (rank < 2) set.
OrientedBox fit_oriented_box(std::span<const Vec3> points, double margin);

// Position uniform in the ball of radius r_max about center (radius via
// r_max * u^(1/3), direction uniform on the sphere; three draws per sample),
// yaw facing back at the center.
Configuration sample_spherical(const Vec3& center, double r_max, Rng& rng);

}  // namespace semcover

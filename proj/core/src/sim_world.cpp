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

#include "semcover/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace semcover {

namespace {

// Moller-Trumbore ray/triangle intersection; returns the ray parameter
// (distance for a unit direction) or a negative value on a miss.
double intersect_triangle(const Vec3& origin, const Vec3& dir, const WorldTriangle& tri) {
  const Vec3 e1 = tri.b - tri.a;
  const Vec3 e2 = tri.c - tri.a;
  const Vec3 pvec = dir.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < 1e-12) return -1.0;
  const double inv_det = 1.0 / det;
  const Vec3 tvec = origin - tri.a;
  const double u = tvec.dot(pvec) * inv_det;
  if (u < 0.0 || u > 1.0) return -1.0;
  const Vec3 qvec = tvec.cross(e1);
  const double v = dir.dot(qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) return -1.0;
  return e2.dot(qvec) * inv_det;
}

double triangle_area(const WorldTriangle& t) {
  return 0.5 * (t.b - t.a).cross(t.c - t.a).norm();
}

}  // namespace

World::World(const AxisBox& bounds, std::vector<WorldTriangle> triangles)
    : bounds_(bounds), triangles_(std::move(triangles)) {
  std::set<int> labels;
  for (const WorldTriangle& t : triangles_) {
    if (t.label > 0) {
      labels.insert(t.label);
      area_by_label_[t.label] += triangle_area(t);
    }
  }
  labels_.assign(labels.begin(), labels.end());
}

double World::semantic_area(int label) const {
  const auto it = area_by_label_.find(label);
  return it == area_by_label_.end() ? 0.0 : it->second;
}

double World::total_semantic_area() const {
  double a = 0.0;
  for (const auto& [label, area] : area_by_label_) a += area;
  return a;
}

bool World::raycast(const Vec3& origin, const Vec3& dir, double max_range,
                    double* hit_distance, int* hit_triangle, double skip_near) const {
  double best = max_range;
  int best_tri = -1;
  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    const double t = intersect_triangle(origin, dir, triangles_[i]);
    if (t > skip_near && t <= best) {
      best = t;
      best_tri = static_cast<int>(i);
    }
  }
  if (best_tri < 0) return false;
  if (hit_distance) *hit_distance = best;
  if (hit_triangle) *hit_triangle = best_tri;
  return true;
}

bool World::segment_blocked(const Vec3& from, const Vec3& to, double slack) const {
  const Vec3 d = to - from;
  const double len = d.norm();
  if (len < kGeomEps) return false;
  double hit = 0.0;
  if (!raycast(from, d / len, len, &hit, nullptr)) return false;
  return hit < len - slack;
}

void append_box(std::vector<WorldTriangle>& out, const AxisBox& box, int label) {
  append_box(out, box, Mat3::Identity(), label);
}

void append_box(std::vector<WorldTriangle>& out, const AxisBox& box, const Mat3& rotation,
                int label) {
  const Vec3 c = box.center();
  const Vec3 h = 0.5 * box.extent();
  Vec3 corner[8];
  for (int k = 0; k < 8; ++k) {
    const Vec3 local((k & 1) ? h.x() : -h.x(), (k & 2) ? h.y() : -h.y(),
                     (k & 4) ? h.z() : -h.z());
    corner[k] = c + rotation * local;
  }
  // Outward-facing quads (two triangles each), corner bits x=1 y=2 z=4.
  static constexpr int kQuads[6][4] = {
      {1, 3, 7, 5},  // +x
      {0, 4, 6, 2},  // -x
      {2, 6, 7, 3},  // +y
      {0, 1, 5, 4},  // -y
      {4, 5, 7, 6},  // +z
      {0, 2, 3, 1},  // -z
  };
  for (const auto& q : kQuads) {
    out.push_back({corner[q[0]], corner[q[1]], corner[q[2]], label});
    out.push_back({corner[q[0]], corner[q[2]], corner[q[3]], label});
  }
}

void append_room_shell(std::vector<WorldTriangle>& out, const AxisBox& room, int label) {
  const Vec3& lo = room.min;
  const Vec3& hi = room.max;
  Vec3 corner[8];
  for (int k = 0; k < 8; ++k)
    corner[k] = Vec3((k & 1) ? hi.x() : lo.x(), (k & 2) ? hi.y() : lo.y(),
                     (k & 4) ? hi.z() : lo.z());
  // Inward-facing quads.
  static constexpr int kQuads[6][4] = {
      {1, 5, 7, 3},  // +x wall
      {0, 2, 6, 4},  // -x wall
      {2, 3, 7, 6},  // +y wall
      {0, 4, 5, 1},  // -y wall
      {4, 6, 7, 5},  // ceiling
      {0, 1, 3, 2},  // floor
  };
  for (const auto& q : kQuads) {
    out.push_back({corner[q[0]], corner[q[1]], corner[q[2]], label});
    out.push_back({corner[q[0]], corner[q[2]], corner[q[3]], label});
  }
}

DepthScan render_depth(const World& world, const Configuration& pose, const DepthSensor& sensor) {
  DepthScan scan;
  const Mat3 sensor_to_world = pose.rotation() * sensor.mount;
  const double deg = M_PI / 180.0;

  const int n_h = std::max(1, static_cast<int>(std::round(sensor.frustum.fov_h_deg / sensor.res_h_deg)));
  const int n_v = std::max(1, static_cast<int>(std::round(sensor.frustum.fov_v_deg / sensor.res_v_deg)));
  scan.hits.reserve(static_cast<std::size_t>(n_h) * n_v);
  scan.labels.reserve(scan.hits.capacity());

  for (int iv = 0; iv < n_v; ++iv) {
    const double el = (-0.5 * sensor.frustum.fov_v_deg + (iv + 0.5) * sensor.frustum.fov_v_deg / n_v) * deg;
    for (int ih = 0; ih < n_h; ++ih) {
      const double az = (-0.5 * sensor.frustum.fov_h_deg + (ih + 0.5) * sensor.frustum.fov_h_deg / n_h) * deg;
      const Vec3 dir_sensor(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
      const Vec3 dir = sensor_to_world * dir_sensor;

      double dist = 0.0;
      int tri = -1;
      if (world.raycast(pose.position, dir, sensor.frustum.max_range, &dist, &tri)) {
        scan.hits.push_back({pose.position + dist * dir, true});
        scan.labels.push_back(world.triangles()[tri].label);
      } else {
        scan.hits.push_back({pose.position + sensor.frustum.max_range * dir, false});
        scan.labels.push_back(-1);
      }
    }
  }
  return scan;
}

std::vector<CameraFaceObs> render_camera_observation(
    const World& world, const std::map<int, SemanticRecord>& records, const Configuration& pose,
    const CameraSensor& camera, double occlusion_slack) {
  std::vector<CameraFaceObs> out;
  for (const auto& [id, record] : records) {
    const TriangleMesh& mesh = record.mesh();
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
      const Face& f = mesh.faces[fi];
      if (!in_frustum(pose, camera.frustum, camera.mount, f.centroid)) continue;
      if (world.segment_blocked(pose.position, f.centroid, occlusion_slack)) continue;
      const double d = (f.centroid - pose.position).norm();
      if (d < kGeomEps) continue;
      CameraFaceObs obs;
      obs.semantic_id = id;
      obs.face = static_cast<int>(fi);
      obs.distance = d;
      obs.angle = viewing_angle(f.centroid, f.normal, pose.position);
      out.push_back(obs);
    }
  }
  return out;
}

ExecutionResult execute_path(std::span<const Configuration> path, const MotionModel& motion,
                             double period) {
  if (path.empty()) throw std::invalid_argument("execute_path: empty path");
  if (!(period > 0.0)) throw std::invalid_argument("execute_path: period must be positive");

  ExecutionResult result;

  // Cumulative segment end times.
  std::vector<double> t_end(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i)
    t_end[i] = t_end[i - 1] + motion.segment_time(path[i - 1], path[i]);
  result.elapsed = t_end.back();

  auto pose_at = [&](double t) -> Configuration {
    if (t <= 0.0) return path.front();
    if (t >= result.elapsed) return path.back();
    std::size_t seg = 1;
    while (seg < path.size() && t_end[seg] < t) ++seg;
    if (seg >= path.size()) return path.back();
    const double t0 = t_end[seg - 1];
    const double dur = t_end[seg] - t0;
    const double u = dur > 0.0 ? (t - t0) / dur : 1.0;
    const Configuration& a = path[seg - 1];
    const Configuration& b = path[seg];
    return Configuration(a.position + u * (b.position - a.position),
                         a.yaw + u * angle_diff(a.yaw, b.yaw));
  };

  // Event times: fixed period grid plus every waypoint time, deduplicated.
  std::vector<double> times;
  for (double t = 0.0; t <= result.elapsed + 1e-12; t += period) times.push_back(std::min(t, result.elapsed));
  for (const double t : t_end) times.push_back(t);
  std::sort(times.begin(), times.end());
  const double t_eps = 1e-9;
  for (const double t : times) {
    if (!result.events.empty() && t - result.events.back().t < t_eps) continue;
    result.events.push_back({t, pose_at(t)});
  }
  return result;
}

}  // namespace semcover

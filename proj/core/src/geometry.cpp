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

#include "semcover/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semcover {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;
}  // namespace

double normalize_yaw(double yaw) {
  double w = std::fmod(yaw, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  if (w > kPi) w -= 2.0 * kPi;
  return w;
}

double angle_diff(double a, double b) { return normalize_yaw(b - a); }

double yaw_towards(const Vec3& from, const Vec3& to) {
  const double dx = to.x() - from.x();
  const double dy = to.y() - from.y();
  if (std::abs(dx) < kGeomEps && std::abs(dy) < kGeomEps) return 0.0;
  return std::atan2(dy, dx);
}

Mat3 Configuration::rotation() const {
  return Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
}

AxisBox AxisBox::intersection(const AxisBox& other) const {
  AxisBox out;
  out.min = min.cwiseMax(other.min);
  out.max = max.cwiseMin(other.max);
  out.max = out.max.cwiseMax(out.min);  // empty boxes collapse to a point
  return out;
}

void FrustumModel::validate() const {
  if (!(fov_h_deg > 0.0 && fov_h_deg <= 360.0))
    throw std::invalid_argument("frustum: horizontal FOV must be in (0, 360]");
  if (!(fov_v_deg > 0.0 && fov_v_deg < 180.0))
    throw std::invalid_argument("frustum: vertical FOV must be in (0, 180)");
  if (!(max_range > 0.0)) throw std::invalid_argument("frustum: max range must be positive");
  if (width < 0 || height < 0 || (width > 0) != (height > 0))
    throw std::invalid_argument("frustum: pixel counts must both be positive or both absent");
}

bool OrientedBox::contains(const Vec3& p, double tol) const {
  const Vec3 local = rotation.transpose() * (p - center);
  return std::abs(local.x()) <= half_extents.x() + tol &&
         std::abs(local.y()) <= half_extents.y() + tol &&
         std::abs(local.z()) <= half_extents.z() + tol;
}

OrientedBox OrientedBox::inflated(double margin) const {
  OrientedBox out = *this;
  out.half_extents += Vec3::Constant(margin);
  return out;
}

double MotionModel::segment_time(const Configuration& a, const Configuration& b) const {
  const double translate = (b.position - a.position).norm() / speed;
  const double turn = std::abs(angle_diff(a.yaw, b.yaw)) / yaw_rate;
  return std::max(translate, turn);
}

double MotionModel::path_time(std::span<const Configuration> path) const {
  double t = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) t += segment_time(path[i - 1], path[i]);
  return t;
}

bool in_frustum(const Configuration& sensor_pose, const FrustumModel& frustum,
                const Mat3& mount, const Vec3& p) {
  const Vec3 body = sensor_pose.rotation().transpose() * (p - sensor_pose.position);
  const Vec3 s = mount.transpose() * body;

  const double range = s.norm();
  if (range > frustum.max_range) return false;
  if (range < kGeomEps) return true;  // sensor origin itself

  if (frustum.fov_h_deg < 360.0) {
    const double az = std::atan2(s.y(), s.x());
    if (std::abs(az) >= 0.5 * frustum.fov_h_deg * kDegToRad) return false;
  }
  const double horiz = std::hypot(s.x(), s.y());
  const double el = std::atan2(s.z(), horiz);
  return std::abs(el) < 0.5 * frustum.fov_v_deg * kDegToRad;
}

bool in_frustum(const Configuration& sensor_pose, const FrustumModel& frustum, const Vec3& p) {
  return in_frustum(sensor_pose, frustum, Mat3::Identity(), p);
}

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na < kGeomEps || nb < kGeomEps)
    throw std::invalid_argument("angle_between: zero-length vector");
  const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return std::acos(c);
}

double viewing_angle(const Vec3& centroid, const Vec3& outward_normal, const Vec3& viewpoint) {
  const Vec3 to_view = viewpoint - centroid;
  if (to_view.norm() < kGeomEps)
    throw std::invalid_argument("viewing_angle: viewpoint coincides with face centroid");
  return angle_between(to_view, outward_normal);
}

double viewing_angle_to_face(const Face& f, const Configuration& xi) {
  return viewing_angle(f.centroid, f.normal, xi.position);
}

OrientedBox fit_oriented_box(std::span<const Vec3> points, double margin) {
  if (points.size() < 3)
    throw std::invalid_argument("fit_oriented_box: need at least 3 points");

  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : points) mean += p;
  mean /= static_cast<double>(points.size());

  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : points) {
    const Vec3 d = p - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());

  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
  if (solver.info() != Eigen::Success)
    throw std::invalid_argument("fit_oriented_box: eigendecomposition failed");

  // Eigen returns ascending eigenvalues; reorder to descending spread.
  std::array<int, 3> order = {2, 1, 0};
  Mat3 axes;
  for (int i = 0; i < 3; ++i) axes.col(i) = solver.eigenvectors().col(order[i]);
  const Vec3 lambda(solver.eigenvalues()(2), solver.eigenvalues()(1), solver.eigenvalues()(0));

  // Collinear sets have no usable second axis.
  if (lambda(1) < 1e-12 * std::max(lambda(0), 1.0))
    throw std::invalid_argument("fit_oriented_box: rank-deficient point spread");

  // Deterministic sign convention: largest-magnitude component positive.
  for (int i = 0; i < 3; ++i) {
    int arg = 0;
    axes.col(i).cwiseAbs().maxCoeff(&arg);
    if (axes(arg, i) < 0.0) axes.col(i) = -axes.col(i);
  }
  if (axes.determinant() < 0.0) axes.col(2) = -axes.col(2);

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const Vec3& p : points) {
    const Vec3 local = axes.transpose() * (p - mean);
    lo = lo.cwiseMin(local);
    hi = hi.cwiseMax(local);
  }

  OrientedBox box;
  box.rotation = axes;
  box.center = mean + axes * (0.5 * (lo + hi));
  box.half_extents = (0.5 * (hi - lo)).cwiseMax(kGeomEps) + Vec3::Constant(margin);
  return box;
}

Configuration sample_spherical(const Vec3& center, double r_max, Rng& rng) {
  const double r = r_max * std::cbrt(rng.uniform());
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * kPi * rng.uniform();
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Vec3 dir(rho * std::cos(phi), rho * std::sin(phi), z);
  const Vec3 pos = center + r * dir;
  return Configuration(pos, yaw_towards(pos, center));
}

}  // namespace semcover

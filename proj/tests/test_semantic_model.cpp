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

#include "semcover/semantic_model.hpp"

#include <cmath>
#include <set>

#include <doctest.h>

#include "semcover/rng.hpp"
#include "support/synthetic.hpp"

using namespace semcover;

namespace {

SemanticModelParams small_params() {
  SemanticModelParams p;
  p.subsample_cell = 0.1;
  p.mesh_cell = 0.1;
  p.truncation = 0.2;
  p.min_hole_perimeter = 0.5;
  return p;
}

}  // namespace

TEST_CASE("point accumulation dedups by subsample cell") {
  SemanticRecord record(1, small_params());
  const Vec3 origin(0, 0, 2);

  record.accumulate_points(origin, std::vector<Vec3>{Vec3(0.51, 0.52, 0.0)});
  CHECK(record.cloud_size() == 1);

  // Exact duplicate: no growth.
  record.accumulate_points(origin, std::vector<Vec3>{Vec3(0.51, 0.52, 0.0)});
  CHECK(record.cloud_size() == 1);

  // Same cell, different point: still one representative.
  record.accumulate_points(origin, std::vector<Vec3>{Vec3(0.53, 0.55, 0.01)});
  CHECK(record.cloud_size() == 1);

  // Different cell.
  record.accumulate_points(origin, std::vector<Vec3>{Vec3(0.72, 0.52, 0.0)});
  CHECK(record.cloud_size() == 2);
}

TEST_CASE("survivor count equals the occupied-cell count on random input") {
  SemanticModelParams params = small_params();
  SemanticRecord record(1, params);
  Rng rng(123);
  std::vector<Vec3> pts;
  for (int i = 0; i < 10000; ++i)
    pts.emplace_back(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2));
  record.accumulate_points(Vec3(1, 1, 5), pts);

  std::set<std::tuple<int, int, int>> cells;
  for (const Vec3& p : pts)
    cells.insert({static_cast<int>(std::floor(p.x() / params.subsample_cell)),
                  static_cast<int>(std::floor(p.y() / params.subsample_cell)),
                  static_cast<int>(std::floor(p.z() / params.subsample_cell))});
  CHECK(record.cloud_size() == cells.size());
}

TEST_CASE("one observed plane patch meshes as an open surface with one hole loop") {
  SemanticRecord record(1, small_params());
  const AxisBox patch{Vec3(-0.513, -0.497, -0.021), Vec3(0.487, 0.503, -0.021)};
  record.accumulate_points(
      Vec3(0.01, 0.02, 2.0),
      testing::plane_points(2, -0.021, patch.min, Vec3(patch.max.x(), patch.max.y(), 1.0), 0.05));
  record.rebuild_mesh();

  const TriangleMesh& mesh = record.mesh();
  REQUIRE_FALSE(mesh.empty());
  CHECK(mesh.edge_invariant_ok());
  for (const Face& f : mesh.faces) CHECK(std::abs(f.centroid.z() + 0.021) < 0.08);
  // Surface area close to the 1 m^2 patch.
  CHECK(mesh.surface_area() == doctest::Approx(1.0).epsilon(0.3));
  // Normals face the sensor (up).
  for (const Face& f : mesh.faces) CHECK(f.normal.z() > 0.0);

  const BoundaryInfo holes = record.boundary_holes();
  REQUIRE(holes.loops.size() == 1);
  CHECK(holes.loops[0].perimeter == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("fully observed box meshes closed: no hole loops above the gap threshold") {
  SemanticRecord record(1, small_params());
  const AxisBox box{Vec3(-1.013, -0.997, -1.021), Vec3(0.987, 1.003, 0.979)};
  testing::observe_box_all_around(record, box, 0.05);
  record.rebuild_mesh();

  REQUIRE_FALSE(record.mesh().empty());
  CHECK(record.mesh().edge_invariant_ok());
  CHECK(record.boundary_holes().loops.empty());
  // Surface area close to the 24 m^2 of a 2 m cube.
  CHECK(record.mesh().surface_area() == doctest::Approx(24.0).epsilon(0.25));
}

TEST_CASE("three points yield an empty mesh or a trivially bounded one") {
  SemanticRecord record(1, small_params());
  record.accumulate_points(Vec3(0, 0, 2),
                           std::vector<Vec3>{Vec3(0, 0, 0), Vec3(0.3, 0, 0), Vec3(0, 0.3, 0)});
  record.rebuild_mesh();
  if (!record.mesh().empty()) {
    CHECK(record.mesh().edge_invariant_ok());
  }
}

TEST_CASE("edge invariant holds across randomized incremental rebuild cycles") {
  Rng rng(2025);
  for (int cycle = 0; cycle < 100; ++cycle) {
    SemanticRecord record(1, small_params());
    const int scans = 1 + rng.uniform_int(4);
    for (int s = 0; s < scans; ++s) {
      const Vec3 origin(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(1.5, 3));
      std::vector<Vec3> pts;
      const int n = 20 + rng.uniform_int(150);
      for (int i = 0; i < n; ++i)
        pts.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.3, 0.3));
      record.accumulate_points(origin, pts);
      record.rebuild_mesh();
      REQUIRE(record.mesh().edge_invariant_ok());

      // Boundary extraction equals an independent edge-count scan.
      std::size_t boundary_by_scan = 0;
      for (const auto& [key, ef] : record.mesh().edge_table())
        if (ef.count == 1) ++boundary_by_scan;
      CHECK(record.boundary_all().edges.size() == boundary_by_scan);
    }
  }
}

TEST_CASE("mesh vertices lie within a cell diagonal of a supporting point") {
  SemanticRecord record(1, small_params());
  const AxisBox box{Vec3(-1.013, -0.997, -1.021), Vec3(0.987, 1.003, 0.979)};
  testing::observe_box_faces(record, box, 0.05, {0, 2, 4});
  record.rebuild_mesh();
  REQUIRE_FALSE(record.mesh().empty());

  const double bound = 2.0 * std::sqrt(3.0) * small_params().mesh_cell;
  for (const Vec3& v : record.mesh().vertices) {
    double nearest = 1e9;
    for (const Vec3& p : record.cloud()) nearest = std::min(nearest, (v - p).norm());
    CHECK(nearest <= bound);
  }
}

TEST_CASE("max view distance: closed form, scaling, monotonicity") {
  FrustumModel cam;
  cam.fov_h_deg = 85;
  cam.fov_v_deg = 64;
  cam.max_range = 7;
  cam.width = 720;
  cam.height = 540;

  CHECK(max_view_distance(5.06, cam) == doctest::Approx(1.8316).epsilon(0.005));

  // Quadrupling the required density halves the distance.
  CHECK(max_view_distance(4.0 * 5.06, cam) ==
        doctest::Approx(0.5 * max_view_distance(5.06, cam)));

  // More pixels, longer reach.
  FrustumModel sharper = cam;
  sharper.width *= 2;
  sharper.height *= 2;
  CHECK(max_view_distance(5.06, sharper) > max_view_distance(5.06, cam));

  CHECK_THROWS_AS(max_view_distance(0.0, cam), std::invalid_argument);
  FrustumModel no_pixels = cam;
  no_pixels.width = no_pixels.height = 0;
  CHECK_THROWS_AS(max_view_distance(5.06, no_pixels), std::invalid_argument);

  // resolution_at_distance inverts it.
  const double l = max_view_distance(5.06, cam);
  CHECK(resolution_at_distance(l, cam) == doctest::Approx(5.06).epsilon(1e-9));
}

TEST_CASE("inspection marking: strict angle, inclusive distance, idempotent") {
  SemanticRecord record(1, small_params());
  const AxisBox patch{Vec3(-0.513, -0.497, -0.021), Vec3(0.487, 0.503, -0.021)};
  record.accumulate_points(
      Vec3(0.01, 0.02, 2.0),
      testing::plane_points(2, -0.021, patch.min, Vec3(patch.max.x(), patch.max.y(), 1.0), 0.05));
  record.rebuild_mesh();
  REQUIRE(record.mesh().faces.size() >= 3);

  const double l_max = 2.0;
  const double theta_max = 45.0 * M_PI / 180.0;

  SUBCASE("angle exactly at the limit is rejected") {
    CameraFaceObs obs{1, 0, 1.0, theta_max};
    CHECK(record.mark_inspected(std::vector<CameraFaceObs>{obs}, l_max, theta_max) == 0);
    CHECK_FALSE(record.face_inspected(0));
  }
  SUBCASE("distance exactly at the limit is accepted") {
    CameraFaceObs obs{1, 0, l_max, 0.2};
    CHECK(record.mark_inspected(std::vector<CameraFaceObs>{obs}, l_max, theta_max) == 1);
    CHECK(record.face_inspected(0));
  }
  SUBCASE("batch marking equals per-condition re-evaluation, and is idempotent") {
    Rng rng(5);
    std::vector<CameraFaceObs> batch;
    for (int i = 0; i < static_cast<int>(record.mesh().faces.size()); ++i)
      batch.push_back({1, i, rng.uniform(0.5, 3.0), rng.uniform(0.0, 1.2)});

    record.mark_inspected(batch, l_max, theta_max);
    for (const CameraFaceObs& o : batch) {
      const bool expect = o.distance <= l_max && o.angle < theta_max;
      CHECK(record.face_inspected(o.face) == expect);
    }
    const std::size_t count = record.inspected_count();
    record.mark_inspected(batch, l_max, theta_max);
    CHECK(record.inspected_count() == count);
  }
  SUBCASE("best distance and angle are minima over qualifying sightings") {
    record.mark_inspected(std::vector<CameraFaceObs>{{1, 0, 1.5, 0.4}}, l_max, theta_max);
    record.mark_inspected(std::vector<CameraFaceObs>{{1, 0, 0.9, 0.6}}, l_max, theta_max);
    CHECK(record.face_best_distance(0) == doctest::Approx(0.9));
    CHECK(record.face_best_angle(0) == doctest::Approx(0.4));
  }
}

TEST_CASE("inspection marks survive a remesh through centroid carry-over") {
  SemanticRecord record(1, small_params());
  const AxisBox box{Vec3(-1.013, -0.997, -1.021), Vec3(0.987, 1.003, 0.979)};
  testing::observe_box_faces(record, box, 0.05, {0, 1, 2, 3});
  record.rebuild_mesh();
  REQUIRE_FALSE(record.mesh().empty());

  // Mark everything currently visible at quality.
  std::vector<CameraFaceObs> batch;
  for (int i = 0; i < static_cast<int>(record.mesh().faces.size()); ++i)
    batch.push_back({1, i, 1.0, 0.1});
  record.mark_inspected(batch, 2.0, 1.0);
  const std::size_t marked_before = record.inspected_count();
  REQUIRE(marked_before == record.mesh().faces.size());

  // New data on other faces, then remesh: the old marks persist.
  testing::observe_box_faces(record, box, 0.05, {4, 5});
  record.rebuild_mesh();
  CHECK(record.inspected_count() >= marked_before / 2);
  CHECK(record.inspected_count() < record.mesh().faces.size());
  CHECK(record.inspected_area() > 0.0);
}

TEST_CASE("mean inspected resolution is the area-weighted pixel density") {
  SemanticRecord record(1, small_params());
  const AxisBox patch{Vec3(-0.513, -0.497, -0.021), Vec3(0.487, 0.503, -0.021)};
  record.accumulate_points(
      Vec3(0.01, 0.02, 2.0),
      testing::plane_points(2, -0.021, patch.min, Vec3(patch.max.x(), patch.max.y(), 1.0), 0.05));
  record.rebuild_mesh();

  FrustumModel cam;
  cam.fov_h_deg = 120;
  cam.fov_v_deg = 110;
  cam.max_range = 7;
  cam.width = 960;
  cam.height = 800;

  CHECK(record.mean_inspected_resolution(cam) == 0.0);
  std::vector<CameraFaceObs> batch;
  for (int i = 0; i < static_cast<int>(record.mesh().faces.size()); ++i)
    batch.push_back({1, i, 1.7, 0.1});
  record.mark_inspected(batch, 2.0, 1.0);
  CHECK(record.mean_inspected_resolution(cam) ==
        doctest::Approx(resolution_at_distance(1.7, cam)).epsilon(1e-9));
}

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

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semcover/geometry.hpp"
#include "semcover/mesh.hpp"

namespace semcover {

// One camera sighting of a reconstructed face: distance from the viewpoint
// to the face centroid and the angle against the outward normal. Quality
// thresholds are applied by mark_inspected, not by the producer.
struct CameraFaceObs {
  int semantic_id = -1;
  int face = -1;
  double distance = 0.0;
  double angle = 0.0;
};

struct SemanticModelParams {
  double subsample_cell = 0.1;       // reconstructed-cloud dedup grid
  double mesh_cell = 0.1;            // signed-distance / surfacing grid
  double truncation = 0.2;           // signed-distance band half-width
  double min_hole_perimeter = 0.6;   // loops below this are ignored as gaps
  Vec3 anchor = Vec3::Zero();        // grid lattice anchor (world min)
};

// Maximum camera-to-face distance at which a fronto-parallel surface patch
// is still imaged at r_min (pixels per cm^2), for a pinhole camera with the
// given pixel counts and FOV. Throws std::invalid_argument for nonpositive
// r_min or a camera without a pixel model.
double max_view_distance(double r_min_px_per_cm2, const FrustumModel& camera);

// Pixel density (pixels per cm^2) delivered on a fronto-parallel patch at
// the given distance; inverse of max_view_distance.
double resolution_at_distance(double distance, const FrustumModel& camera);

// Per-semantic reconstruction state: accumulated segmented cloud, fused
// signed-distance band, the extracted surface mesh, and per-face inspection
// marks.
class SemanticRecord {
 public:
  SemanticRecord(int id, const SemanticModelParams& params);

  int id() const { return id_; }
  const SemanticModelParams& params() const { return params_; }

  // Appends a segmented depth return batch (all points labeled with this
  // record's semantic), dedups against the subsample grid, and fuses the
  // observation into the signed-distance band. Deterministic in call order.
  void accumulate_points(const Vec3& sensor_origin, std::span<const Vec3> points);

  // Re-extracts the surface from the current band. Inspection marks carry
  // over to new faces whose centroid lies within one subsample cell of a
  // previously inspected centroid.
  void rebuild_mesh();

  const TriangleMesh& mesh() const { return mesh_; }
  std::uint64_t mesh_version() const { return mesh_version_; }
  bool has_unfused_data() const { return dirty_; }

  const std::vector<Vec3>& cloud() const { return cloud_; }
  std::size_t cloud_size() const { return cloud_.size(); }

  BoundaryInfo boundary_all() const { return extract_boundary_edges(mesh_); }
  BoundaryInfo boundary_holes() const {
    return filter_small_holes(boundary_all(), params_.min_hole_perimeter);
  }

  // Applies the inspection-quality thresholds to a batch of camera
  // observations: a face is marked iff distance <= l_max and
  // angle < theta_i_max. Keeps the best (minimum) qualifying distance and
  // angle per face. Returns the number of newly marked faces.
  int mark_inspected(std::span<const CameraFaceObs> observations, double l_max,
                     double theta_i_max);

  bool face_inspected(int face) const { return inspected_[face] != 0; }
  double face_best_distance(int face) const { return best_distance_[face]; }
  double face_best_angle(int face) const { return best_angle_[face]; }
  const std::vector<std::uint8_t>& inspected_flags() const { return inspected_; }

  std::size_t inspected_count() const;
  double inspected_area() const;
  std::vector<int> uninspected_faces() const;

  // Area-weighted mean pixel density over inspected faces at their best
  // viewing distance; 0 when nothing is inspected.
  double mean_inspected_resolution(const FrustumModel& camera) const;

  void write_ply(const std::filesystem::path& file) const;

  // Seconds of hole-coverage execution spent on this semantic.
  double hole_budget_used = 0.0;

 private:
  struct TsdfNode {
    float value = 0.0f;
    float weight = 0.0f;
  };

  void fuse_observation(const Vec3& origin, std::span<const Vec3> points);
  void carry_over_marks(const std::vector<Vec3>& old_centroids,
                        const std::vector<std::uint8_t>& old_inspected,
                        const std::vector<double>& old_distance,
                        const std::vector<double>& old_angle);

  int id_;
  SemanticModelParams params_;

  std::vector<Vec3> cloud_;                        // subsampled P_R
  std::unordered_set<std::uint64_t> cloud_cells_;  // occupied subsample cells

  std::unordered_map<std::uint64_t, TsdfNode> nodes_;  // band nodes, mesh lattice
  std::unordered_set<std::uint64_t> support_;          // mesh cells holding points

  struct ObservationLogEntry {
    Vec3 origin;
    std::uint32_t point_count;
  };
  std::vector<ObservationLogEntry> observation_log_;

  TriangleMesh mesh_;
  std::uint64_t mesh_version_ = 0;
  bool dirty_ = false;

  std::vector<std::uint8_t> inspected_;
  std::vector<double> best_distance_;
  std::vector<double> best_angle_;
};

}  // namespace semcover

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
#include <vector>

#include "semcover/geometry.hpp"

namespace semcover {

// Undirected edge key (ordered vertex pair packed into 64 bits).
inline std::uint64_t edge_key(int a, int b) {
  const std::uint32_t lo = static_cast<std::uint32_t>(a < b ? a : b);
  const std::uint32_t hi = static_cast<std::uint32_t>(a < b ? b : a);
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

// Faces incident to one undirected edge. A valid mesh has 1 or 2.
struct EdgeFaces {
  int count = 0;
  std::array<int, 2> face = {-1, -1};
};

// Indexed triangle surface with an undirected edge -> incident face table.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  // Recomputes per-face centroid/normal/area and the edge table. Face
  // normals follow the stored winding (counter-clockwise seen from outside).
  void rebuild_adjacency();

  const std::unordered_map<std::uint64_t, EdgeFaces>& edge_table() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return faces.empty(); }

  // Checks the 1-or-2 incident faces invariant over the whole table.
  bool edge_invariant_ok() const;

  double surface_area() const;
  // Area-weighted centroid of the surface.
  Vec3 area_centroid() const;

 private:
  std::unordered_map<std::uint64_t, EdgeFaces> edges_;
};

// Edge incident to exactly one face (a hole frontier or open border).
struct BoundaryEdge {
  int va = -1, vb = -1;
  Vec3 midpoint = Vec3::Zero();
  int face = -1;     // the single incident face
  int loop_id = -1;  // connected group of boundary edges
};

struct HoleLoop {
  std::vector<int> edges;  // indices into BoundaryInfo::edges
  double perimeter = 0.0;
};

struct BoundaryInfo {
  std::vector<BoundaryEdge> edges;
  std::vector<HoleLoop> loops;
};

// All boundary edges, grouped into loops by walking shared boundary
// vertices. Loop ids are assigned in deterministic (sorted edge) order.
BoundaryInfo extract_boundary_edges(const TriangleMesh& mesh);

// Drops loops with perimeter strictly below min_perimeter.
BoundaryInfo filter_small_holes(const BoundaryInfo& info, double min_perimeter);

// In-plane direction perpendicular to boundary edge (va, vb) of `face`,
// pointing away from the face interior.
Vec3 boundary_outward_direction(const TriangleMesh& mesh, const BoundaryEdge& edge);

// ASCII PLY export with per-face scalars: inspected flag, best viewing
// distance (m), best viewing angle (rad).
void write_ply(const std::filesystem::path& file, const TriangleMesh& mesh,
               std::span<const std::uint8_t> inspected, std::span<const double> best_distance,
               std::span<const double> best_angle);

}  // namespace semcover

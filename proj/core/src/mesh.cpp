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

#include "semcover/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace semcover {

void TriangleMesh::rebuild_adjacency() {
  edges_.clear();
  edges_.reserve(faces.size() * 2);
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    Face& f = faces[fi];
    const Vec3& a = vertices[f.v[0]];
    const Vec3& b = vertices[f.v[1]];
    const Vec3& c = vertices[f.v[2]];
    const Vec3 n = (b - a).cross(c - a);
    const double n_norm = n.norm();
    f.centroid = (a + b + c) / 3.0;
    f.area = 0.5 * n_norm;
    f.normal = n_norm > 1e-18 ? Vec3(n / n_norm) : Vec3::UnitZ();

    for (int e = 0; e < 3; ++e) {
      EdgeFaces& ef = edges_[edge_key(f.v[e], f.v[(e + 1) % 3])];
      if (ef.count < 2) ef.face[ef.count] = static_cast<int>(fi);
      ++ef.count;
    }
  }
}

bool TriangleMesh::edge_invariant_ok() const {
  for (const auto& [key, ef] : edges_)
    if (ef.count < 1 || ef.count > 2) return false;
  return true;
}

double TriangleMesh::surface_area() const {
  double a = 0.0;
  for (const Face& f : faces) a += f.area;
  return a;
}

Vec3 TriangleMesh::area_centroid() const {
  Vec3 c = Vec3::Zero();
  double a = 0.0;
  for (const Face& f : faces) {
    c += f.area * f.centroid;
    a += f.area;
  }
  return a > 0.0 ? Vec3(c / a) : c;
}

BoundaryInfo extract_boundary_edges(const TriangleMesh& mesh) {
  BoundaryInfo info;

  // Deterministic order: sort boundary edges by (va, vb).
  std::vector<std::pair<std::uint64_t, int>> boundary;  // key, face
  for (const auto& [key, ef] : mesh.edge_table())
    if (ef.count == 1) boundary.emplace_back(key, ef.face[0]);
  std::sort(boundary.begin(), boundary.end());

  std::unordered_map<int, std::vector<int>> by_vertex;  // vertex -> edge indices
  for (const auto& [key, face] : boundary) {
    BoundaryEdge e;
    e.va = static_cast<int>(key >> 32);
    e.vb = static_cast<int>(key & 0xFFFFFFFFull);
    e.face = face;
    e.midpoint = 0.5 * (mesh.vertices[e.va] + mesh.vertices[e.vb]);
    const int idx = static_cast<int>(info.edges.size());
    by_vertex[e.va].push_back(idx);
    by_vertex[e.vb].push_back(idx);
    info.edges.push_back(e);
  }

  // Group into loops: connected components over shared boundary vertices.
  std::vector<int> stack;
  for (std::size_t i = 0; i < info.edges.size(); ++i) {
    if (info.edges[i].loop_id >= 0) continue;
    const int loop_id = static_cast<int>(info.loops.size());
    HoleLoop loop;
    stack.push_back(static_cast<int>(i));
    info.edges[i].loop_id = loop_id;
    while (!stack.empty()) {
      const int e = stack.back();
      stack.pop_back();
      loop.edges.push_back(e);
      loop.perimeter +=
          (mesh.vertices[info.edges[e].va] - mesh.vertices[info.edges[e].vb]).norm();
      for (const int v : {info.edges[e].va, info.edges[e].vb}) {
        for (const int other : by_vertex[v]) {
          if (info.edges[other].loop_id < 0) {
            info.edges[other].loop_id = loop_id;
            stack.push_back(other);
          }
        }
      }
    }
    std::sort(loop.edges.begin(), loop.edges.end());
    info.loops.push_back(std::move(loop));
  }
  return info;
}

BoundaryInfo filter_small_holes(const BoundaryInfo& info, double min_perimeter) {
  BoundaryInfo out;
  std::unordered_map<int, int> loop_remap;
  for (std::size_t li = 0; li < info.loops.size(); ++li) {
    if (info.loops[li].perimeter < min_perimeter) continue;
    const int new_id = static_cast<int>(out.loops.size());
    loop_remap[static_cast<int>(li)] = new_id;
    HoleLoop loop;
    loop.perimeter = info.loops[li].perimeter;
    for (const int e : info.loops[li].edges) {
      BoundaryEdge be = info.edges[e];
      be.loop_id = new_id;
      loop.edges.push_back(static_cast<int>(out.edges.size()));
      out.edges.push_back(be);
    }
    out.loops.push_back(std::move(loop));
  }
  return out;
}

Vec3 boundary_outward_direction(const TriangleMesh& mesh, const BoundaryEdge& edge) {
  const Face& f = mesh.faces[edge.face];
  const Vec3 e = (mesh.vertices[edge.vb] - mesh.vertices[edge.va]).normalized();
  Vec3 dir = e.cross(f.normal);
  // Point away from the face interior (away from the opposite vertex).
  int opposite = f.v[0];
  for (const int v : f.v)
    if (v != edge.va && v != edge.vb) opposite = v;
  if (dir.dot(mesh.vertices[opposite] - edge.midpoint) > 0.0) dir = -dir;
  const double n = dir.norm();
  return n > 1e-18 ? Vec3(dir / n) : f.normal;
}

void write_ply(const std::filesystem::path& file, const TriangleMesh& mesh,
               std::span<const std::uint8_t> inspected, std::span<const double> best_distance,
               std::span<const double> best_angle) {
  if (inspected.size() != mesh.faces.size() || best_distance.size() != mesh.faces.size() ||
      best_angle.size() != mesh.faces.size())
    throw std::invalid_argument("write_ply: per-face property size mismatch");

  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_ply: cannot open " + file.string());
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "element face " << mesh.faces.size() << "\n";
  out << "property list uchar int vertex_indices\n";
  out << "property uchar inspected\n";
  out << "property float best_distance\n";
  out << "property float best_angle\n";
  out << "end_header\n";
  out.precision(7);
  for (const Vec3& v : mesh.vertices) out << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const Face& f = mesh.faces[i];
    out << "3 " << f.v[0] << " " << f.v[1] << " " << f.v[2] << " "
        << static_cast<int>(inspected[i]) << " " << best_distance[i] << " " << best_angle[i]
        << "\n";
  }
}

}  // namespace semcover

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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semcover {

namespace {

// Signed 21-bit per-axis lattice key; covers +-1e6 cells around the anchor.
constexpr std::int64_t kKeyBias = 1 << 20;

std::uint64_t lattice_key(int x, int y, int z) {
  return (static_cast<std::uint64_t>(x + kKeyBias) << 42) |
         (static_cast<std::uint64_t>(y + kKeyBias) << 21) |
         static_cast<std::uint64_t>(z + kKeyBias);
}

std::array<int, 3> lattice_coords(std::uint64_t key) {
  return {static_cast<int>((key >> 42) & 0x1FFFFF) - static_cast<int>(kKeyBias),
          static_cast<int>((key >> 21) & 0x1FFFFF) - static_cast<int>(kKeyBias),
          static_cast<int>(key & 0x1FFFFF) - static_cast<int>(kKeyBias)};
}

std::array<int, 3> cell_of(const Vec3& p, const Vec3& anchor, double cell) {
  return {static_cast<int>(std::floor((p.x() - anchor.x()) / cell)),
          static_cast<int>(std::floor((p.y() - anchor.y()) / cell)),
          static_cast<int>(std::floor((p.z() - anchor.z()) / cell))};
}

struct PairKeyHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
    std::uint64_t h = k.first * 0x9E3779B97F4A7C15ull;
    h ^= k.second + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// Freudenthal 6-tetrahedron split of the unit cube (corner bits: x=1, y=2,
// z=4). All tets share the 0-7 diagonal; the induced face diagonals agree
// between neighboring cubes.
constexpr std::array<std::array<int, 4>, 6> kCubeTets = {{
    {0, 1, 3, 7},
    {0, 1, 5, 7},
    {0, 2, 3, 7},
    {0, 2, 6, 7},
    {0, 4, 5, 7},
    {0, 4, 6, 7},
}};

}  // namespace

double max_view_distance(double r_min_px_per_cm2, const FrustumModel& camera) {
  if (!(r_min_px_per_cm2 > 0.0))
    throw std::invalid_argument("max_view_distance: r_min must be positive");
  if (!camera.has_pixels())
    throw std::invalid_argument("max_view_distance: camera needs pixel counts");
  const double r_min_m2 = r_min_px_per_cm2 * 1e4;  // pixels per m^2
  const double tan_h = std::tan(0.5 * camera.fov_h_deg * M_PI / 180.0);
  const double tan_v = std::tan(0.5 * camera.fov_v_deg * M_PI / 180.0);
  const double px = static_cast<double>(camera.width) * camera.height;
  return std::sqrt(px / (4.0 * r_min_m2 * tan_h * tan_v));
}

double resolution_at_distance(double distance, const FrustumModel& camera) {
  if (!(distance > 0.0)) throw std::invalid_argument("resolution_at_distance: distance must be positive");
  if (!camera.has_pixels())
    throw std::invalid_argument("resolution_at_distance: camera needs pixel counts");
  const double tan_h = std::tan(0.5 * camera.fov_h_deg * M_PI / 180.0);
  const double tan_v = std::tan(0.5 * camera.fov_v_deg * M_PI / 180.0);
  const double px = static_cast<double>(camera.width) * camera.height;
  return px / (4.0 * distance * distance * tan_h * tan_v) / 1e4;
}

SemanticRecord::SemanticRecord(int id, const SemanticModelParams& params)
    : id_(id), params_(params) {
  if (!(params.subsample_cell > 0.0) || !(params.mesh_cell > 0.0) ||
      !(params.truncation > 0.0))
    throw std::invalid_argument("semantic record: cell sizes must be positive");
}

void SemanticRecord::accumulate_points(const Vec3& sensor_origin,
                                       std::span<const Vec3> points) {
  for (const Vec3& p : points) {
    const auto c = cell_of(p, params_.anchor, params_.subsample_cell);
    const std::uint64_t key = lattice_key(c[0], c[1], c[2]);
    if (cloud_cells_.insert(key).second) cloud_.push_back(p);

    const auto mc = cell_of(p, params_.anchor, params_.mesh_cell);
    support_.insert(lattice_key(mc[0], mc[1], mc[2]));
  }
  fuse_observation(sensor_origin, points);
  observation_log_.push_back({sensor_origin, static_cast<std::uint32_t>(points.size())});
  if (!points.empty()) dirty_ = true;
}

void SemanticRecord::fuse_observation(const Vec3& origin, std::span<const Vec3> points) {
  const double h = params_.mesh_cell;
  const double tau = params_.truncation;
  const double rho_max = 0.87 * h;

  for (const Vec3& p : points) {
    const Vec3 ray = p - origin;
    const double depth = ray.norm();
    if (depth < kGeomEps) continue;
    const Vec3 u = ray / depth;

    const auto lo = cell_of(p - Vec3::Constant(tau), params_.anchor, h);
    const auto hi = cell_of(p + Vec3::Constant(tau), params_.anchor, h);
    for (int z = lo[2]; z <= hi[2] + 1; ++z)
      for (int y = lo[1]; y <= hi[1] + 1; ++y)
        for (int x = lo[0]; x <= hi[0] + 1; ++x) {
          const Vec3 node = params_.anchor + h * Vec3(x, y, z);
          const Vec3 q = node - origin;
          const double proj = q.dot(u);
          if (proj <= kGeomEps) continue;
          const double rho = (q - proj * u).norm();
          if (rho > rho_max) continue;
          double sdf = depth - proj;
          if (sdf < -tau) continue;
          sdf = std::min(sdf, tau);

          // Behind-surface evidence decays with depth so that free-space
          // sightings from other directions win near edges and corners.
          const double w = sdf >= 0.0 ? 1.0 : (tau + sdf) / tau;
          if (w <= 0.0) continue;

          TsdfNode& n = nodes_[lattice_key(x, y, z)];
          n.value = static_cast<float>((n.value * n.weight + sdf * w) / (n.weight + w));
          n.weight += static_cast<float>(w);
        }
  }

  // Free-space carving: band nodes the ray passes well in front of the hit
  // are confirmed air. Only existing nodes are touched, so the band stays
  // narrow.
  for (const Vec3& p : points) {
    const Vec3 ray = p - origin;
    const double depth = ray.norm();
    if (depth < kGeomEps) continue;
    const Vec3 u = ray / depth;
    const double step = 0.5 * h;
    for (double t = step; t < depth - tau; t += step) {
      const Vec3 q = origin + t * u;
      const auto base = cell_of(q, params_.anchor, h);
      for (int dz = 0; dz <= 1; ++dz)
        for (int dy = 0; dy <= 1; ++dy)
          for (int dx = 0; dx <= 1; ++dx) {
            const auto it = nodes_.find(lattice_key(base[0] + dx, base[1] + dy, base[2] + dz));
            if (it == nodes_.end()) continue;
            const Vec3 node = params_.anchor +
                              h * Vec3(base[0] + dx, base[1] + dy, base[2] + dz);
            const Vec3 v = node - origin;
            const double proj = v.dot(u);
            if (proj <= kGeomEps || proj >= depth - tau) continue;
            if ((v - proj * u).norm() > rho_max) continue;
            TsdfNode& n = it->second;
            n.value = static_cast<float>((n.value * n.weight + tau) / (n.weight + 1.0));
            n.weight += 1.0f;
          }
    }
  }
}

void SemanticRecord::rebuild_mesh() {
  // Stash current marks for carry-over.
  std::vector<Vec3> old_centroids(mesh_.faces.size());
  for (std::size_t i = 0; i < mesh_.faces.size(); ++i) old_centroids[i] = mesh_.faces[i].centroid;
  const std::vector<std::uint8_t> old_inspected = inspected_;
  const std::vector<double> old_distance = best_distance_;
  const std::vector<double> old_angle = best_angle_;

  mesh_ = TriangleMesh{};

  // Candidate cells: every cell incident to a band node, kept when all of
  // its corners carry data and a point supports its neighborhood.
  std::unordered_set<std::uint64_t> candidates;
  candidates.reserve(nodes_.size() * 2);
  for (const auto& [key, node] : nodes_) {
    const auto c = lattice_coords(key);
    for (int dz = -1; dz <= 0; ++dz)
      for (int dy = -1; dy <= 0; ++dy)
        for (int dx = -1; dx <= 0; ++dx)
          candidates.insert(lattice_key(c[0] + dx, c[1] + dy, c[2] + dz));
  }
  std::vector<std::uint64_t> cells(candidates.begin(), candidates.end());
  std::sort(cells.begin(), cells.end());

  const double h = params_.mesh_cell;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, int, PairKeyHash> edge_vertex;

  auto node_value = [&](int x, int y, int z, double* value) {
    const auto it = nodes_.find(lattice_key(x, y, z));
    if (it == nodes_.end() || it->second.weight <= 0.0f) return false;
    double v = it->second.value;
    if (v == 0.0) v = 1e-12;  // keep crossings off lattice nodes
    *value = v;
    return true;
  };
  auto supported = [&](const std::array<int, 3>& c) {
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (support_.count(lattice_key(c[0] + dx, c[1] + dy, c[2] + dz))) return true;
    return false;
  };

  for (const std::uint64_t cell : cells) {
    const auto c = lattice_coords(cell);
    double value[8];
    std::array<int, 3> corner_coord[8];
    bool complete = true;
    for (int k = 0; k < 8 && complete; ++k) {
      corner_coord[k] = {c[0] + (k & 1), c[1] + ((k >> 1) & 1), c[2] + ((k >> 2) & 1)};
      complete = node_value(corner_coord[k][0], corner_coord[k][1], corner_coord[k][2], &value[k]);
    }
    if (!complete || !supported(c)) continue;

    for (const auto& tet : kCubeTets) {
      int neg[4], pos[4];
      int n_neg = 0, n_pos = 0;
      for (const int k : tet) {
        if (value[k] < 0.0)
          neg[n_neg++] = k;
        else
          pos[n_pos++] = k;
      }
      if (n_neg == 0 || n_pos == 0) continue;

      auto corner_pos = [&](int k) {
        return Vec3(params_.anchor +
                    h * Vec3(corner_coord[k][0], corner_coord[k][1], corner_coord[k][2]));
      };
      auto crossing = [&](int a, int b) {  // a negative, b positive
        const std::uint64_t ka = lattice_key(corner_coord[a][0], corner_coord[a][1], corner_coord[a][2]);
        const std::uint64_t kb = lattice_key(corner_coord[b][0], corner_coord[b][1], corner_coord[b][2]);
        const auto key = ka < kb ? std::make_pair(ka, kb) : std::make_pair(kb, ka);
        const auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;
        const double va = value[a];
        const double vb = value[b];
        const double t = va / (va - vb);
        const Vec3 p = corner_pos(a) + t * (corner_pos(b) - corner_pos(a));
        const int idx = static_cast<int>(mesh_.vertices.size());
        mesh_.vertices.push_back(p);
        edge_vertex.emplace(key, idx);
        return idx;
      };
      auto emit = [&](int v0, int v1, int v2) {
        // Orient outward: normal away from the solid (negative) side.
        Vec3 mean_neg = Vec3::Zero(), mean_pos = Vec3::Zero();
        for (int i = 0; i < n_neg; ++i) mean_neg += corner_pos(neg[i]);
        for (int i = 0; i < n_pos; ++i) mean_pos += corner_pos(pos[i]);
        mean_neg /= n_neg;
        mean_pos /= n_pos;
        const Vec3 a = mesh_.vertices[v0];
        const Vec3 n = (mesh_.vertices[v1] - a).cross(mesh_.vertices[v2] - a);
        Face f;
        if (n.dot(mean_pos - mean_neg) >= 0.0)
          f.v = {v0, v1, v2};
        else
          f.v = {v0, v2, v1};
        mesh_.faces.push_back(f);
      };

      if (n_neg == 1) {
        emit(crossing(neg[0], pos[0]), crossing(neg[0], pos[1]), crossing(neg[0], pos[2]));
      } else if (n_neg == 3) {
        emit(crossing(neg[0], pos[0]), crossing(neg[1], pos[0]), crossing(neg[2], pos[0]));
      } else {  // 2-2: quad ring ac-ad-bd-bc
        const int ac = crossing(neg[0], pos[0]);
        const int ad = crossing(neg[0], pos[1]);
        const int bc = crossing(neg[1], pos[0]);
        const int bd = crossing(neg[1], pos[1]);
        emit(ac, ad, bd);
        emit(ac, bd, bc);
      }
    }
  }

  // Drop degenerate output before building adjacency.
  std::vector<Face> kept;
  kept.reserve(mesh_.faces.size());
  for (const Face& f : mesh_.faces) {
    if (f.v[0] == f.v[1] || f.v[1] == f.v[2] || f.v[0] == f.v[2]) continue;
    const Vec3& a = mesh_.vertices[f.v[0]];
    const Vec3 n = (mesh_.vertices[f.v[1]] - a).cross(mesh_.vertices[f.v[2]] - a);
    if (0.5 * n.norm() < 1e-14) continue;
    kept.push_back(f);
  }
  mesh_.faces = std::move(kept);
  mesh_.rebuild_adjacency();

  inspected_.assign(mesh_.faces.size(), 0);
  best_distance_.assign(mesh_.faces.size(), std::numeric_limits<double>::infinity());
  best_angle_.assign(mesh_.faces.size(), std::numeric_limits<double>::infinity());
  carry_over_marks(old_centroids, old_inspected, old_distance, old_angle);

  ++mesh_version_;
  dirty_ = false;
}

void SemanticRecord::carry_over_marks(const std::vector<Vec3>& old_centroids,
                                      const std::vector<std::uint8_t>& old_inspected,
                                      const std::vector<double>& old_distance,
                                      const std::vector<double>& old_angle) {
  const double r = params_.subsample_cell;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  for (std::size_t i = 0; i < old_centroids.size(); ++i) {
    if (!old_inspected[i]) continue;
    const auto c = cell_of(old_centroids[i], params_.anchor, r);
    buckets[lattice_key(c[0], c[1], c[2])].push_back(static_cast<int>(i));
  }
  if (buckets.empty()) return;

  for (std::size_t fi = 0; fi < mesh_.faces.size(); ++fi) {
    const Vec3& c = mesh_.faces[fi].centroid;
    const auto cc = cell_of(c, params_.anchor, r);
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const auto it = buckets.find(lattice_key(cc[0] + dx, cc[1] + dy, cc[2] + dz));
          if (it == buckets.end()) continue;
          for (const int oi : it->second) {
            if ((old_centroids[oi] - c).norm() > r) continue;
            inspected_[fi] = 1;
            best_distance_[fi] = std::min(best_distance_[fi], old_distance[oi]);
            best_angle_[fi] = std::min(best_angle_[fi], old_angle[oi]);
          }
        }
  }
}

int SemanticRecord::mark_inspected(std::span<const CameraFaceObs> observations, double l_max,
                                   double theta_i_max) {
  int newly = 0;
  for (const CameraFaceObs& obs : observations) {
    if (obs.face < 0 || obs.face >= static_cast<int>(mesh_.faces.size())) continue;
    if (obs.distance > l_max) continue;    // range inclusive
    if (obs.angle >= theta_i_max) continue;  // angle strict
    if (!inspected_[obs.face]) {
      inspected_[obs.face] = 1;
      ++newly;
    }
    best_distance_[obs.face] = std::min(best_distance_[obs.face], obs.distance);
    best_angle_[obs.face] = std::min(best_angle_[obs.face], obs.angle);
  }
  return newly;
}

std::size_t SemanticRecord::inspected_count() const {
  return static_cast<std::size_t>(std::count(inspected_.begin(), inspected_.end(), 1));
}

double SemanticRecord::inspected_area() const {
  double a = 0.0;
  for (std::size_t i = 0; i < mesh_.faces.size(); ++i)
    if (inspected_[i]) a += mesh_.faces[i].area;
  return a;
}

std::vector<int> SemanticRecord::uninspected_faces() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < mesh_.faces.size(); ++i)
    if (!inspected_[i]) out.push_back(static_cast<int>(i));
  return out;
}

double SemanticRecord::mean_inspected_resolution(const FrustumModel& camera) const {
  double area = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < mesh_.faces.size(); ++i) {
    if (!inspected_[i]) continue;
    const double d = best_distance_[i];
    if (!(d > 0.0) || !std::isfinite(d)) continue;
    weighted += mesh_.faces[i].area * resolution_at_distance(d, camera);
    area += mesh_.faces[i].area;
  }
  return area > 0.0 ? weighted / area : 0.0;
}

void SemanticRecord::write_ply(const std::filesystem::path& file) const {
  std::vector<double> dist(best_distance_.size());
  std::vector<double> ang(best_angle_.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    dist[i] = std::isfinite(best_distance_[i]) ? best_distance_[i] : -1.0;
    ang[i] = std::isfinite(best_angle_[i]) ? best_angle_[i] : -1.0;
  }
  semcover::write_ply(file, mesh_, inspected_, dist, ang);
}

}  // namespace semcover

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

#include "semcover/mission.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace semcover {

namespace {

// Substream namespaces so every randomized stage draws an independent stream.
constexpr std::uint64_t kStreamLocalGraph = 1ull << 32;
constexpr std::uint64_t kStreamHolePhase = 2ull << 32;
constexpr std::uint64_t kStreamInspectGraph = 3ull << 32;
constexpr std::uint64_t kStreamInspectPlan = 4ull << 32;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Transit waypoints fly velocity-aligned; only the terminal vertex keeps the
// yaw the planner scored it with.
std::vector<Configuration> heading_aligned(std::span<const Configuration> path) {
  std::vector<Configuration> out(path.begin(), path.end());
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    const Vec3 d = out[i + 1].position - out[i].position;
    if (std::hypot(d.x(), d.y()) > 1e-6)
      out[i].yaw = std::atan2(d.y(), d.x());
    else if (i > 0)
      out[i].yaw = out[i - 1].yaw;
  }
  return out;
}

}  // namespace

const char* to_string(PlannerMode mode) {
  switch (mode) {
    case PlannerMode::Swap: return "swap";
    case PlannerMode::ExploreOnly: return "explore-only";
    case PlannerMode::SurfaceGain: return "surface-gain";
  }
  return "?";
}

const char* to_string(BehaviorMode mode) {
  switch (mode) {
    case BehaviorMode::Exploration: return "exploration";
    case BehaviorMode::HoleCoverage: return "hole_coverage";
    case BehaviorMode::Inspection: return "inspection";
    case BehaviorMode::Done: return "done";
  }
  return "?";
}

std::optional<PlannerMode> planner_mode_from_string(const std::string& name) {
  if (name == "swap") return PlannerMode::Swap;
  if (name == "explore-only") return PlannerMode::ExploreOnly;
  if (name == "surface-gain") return PlannerMode::SurfaceGain;
  return std::nullopt;
}

Mission::Mission(const Scenario& scenario, PlannerMode mode, std::uint64_t seed, int threads)
    : scenario_(scenario),
      planner_mode_(mode),
      threads_(std::max(1, threads)),
      rng_(seed),
      world_(scenario.build_world()),
      grid_(OccupancyGrid::covering(scenario.bounds, scenario.voxel_size)),
      xi_(scenario.start) {
  scenario_.seed = seed;
  wall_start_ = std::chrono::steady_clock::now();

  // Ground-truth surface patches for the inspection metric: subdivide every
  // semantic triangle to roughly twice the surfacing cell.
  const double patch_size = 2.0 * scenario_.mesh_cell;
  for (const WorldTriangle& tri : world_.triangles()) {
    if (tri.label <= 0) continue;
    const double max_edge = std::max({(tri.b - tri.a).norm(), (tri.c - tri.b).norm(),
                                      (tri.a - tri.c).norm()});
    const int n = std::max(1, static_cast<int>(std::ceil(max_edge / patch_size)));
    const double area = 0.5 * (tri.b - tri.a).cross(tri.c - tri.a).norm() /
                        static_cast<double>(n * n);
    Vec3 normal = (tri.b - tri.a).cross(tri.c - tri.a);
    normal.normalize();
    // Barycentric n^2 subdivision: row i has 2i+1 sub-triangles.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= 2 * i; ++j) {
        const int r = n - 1 - i;  // rows counted from vertex a
        double u, v;
        if (j % 2 == 0) {  // upright cell centroids
          u = (r + 1.0 / 3.0) / n;
          v = (j / 2 + 1.0 / 3.0) / n;
        } else {  // inverted cell centroids
          u = (r + 2.0 / 3.0) / n;
          v = ((j - 1) / 2 + 2.0 / 3.0) / n;
        }
        // u along (a->?) barycentric of vertex a, v of vertex b.
        const double w = 1.0 - u - v;
        Patch p;
        p.center = u * tri.a + v * tri.b + w * tri.c;
        p.normal = normal;
        p.area = area;
        p.label = tri.label;
        patches_.push_back(p);
        patch_area_by_label_[tri.label] += area;
      }
    }
  }
}

GainMode Mission::gain_mode() const {
  return planner_mode_ == PlannerMode::SurfaceGain ? GainMode::Surface : GainMode::Volumetric;
}

void Mission::initialize() {
  if (initialized_) return;
  initialized_ = true;
  if (scenario_.time_budget <= 0.0) {
    mode_ = BehaviorMode::Done;
    done_reason_ = "time budget exhausted";
    return;
  }
  process_event(0.0, xi_, /*first_of_path=*/true);
  remesh_dirty();
  update_global_graph(global_graph_, std::vector<Configuration>{xi_}, grid_, scenario_.body,
                      scenario_.motion, scenario_.sparsify_radius);
  sample_metrics();
}

void Mission::process_event(double t, const Configuration& pose, bool first_of_path) {
  // Re-scanning the pose we just finished at adds nothing.
  if (first_of_path && !trace_.empty()) return;

  const DepthScan scan = render_depth(world_, pose, scenario_.depth);
  grid_.integrate_depth_scan(pose, scan.hits);

  std::map<int, std::vector<Vec3>> by_label;
  for (std::size_t i = 0; i < scan.hits.size(); ++i)
    if (scan.labels[i] > 0) by_label[scan.labels[i]].push_back(scan.hits[i].point);
  for (const auto& [label, points] : by_label) {
    auto it = records_.find(label);
    if (it == records_.end()) {
      it = records_.emplace(label, SemanticRecord(label, scenario_.semantic_params())).first;
      detected_.insert(label);
    }
    it->second.accumulate_points(pose.position, points);
  }

  const std::vector<CameraFaceObs> obs = render_camera_observation(
      world_, records_, pose, scenario_.camera, scenario_.voxel_size);
  std::map<int, std::vector<CameraFaceObs>> obs_by_id;
  for (const CameraFaceObs& o : obs) obs_by_id[o.semantic_id].push_back(o);
  const double l_max = scenario_.l_max();
  const double theta_i_max = scenario_.theta_i_max_deg * M_PI / 180.0;
  for (const auto& [id, batch] : obs_by_id)
    records_.at(id).mark_inspected(batch, l_max, theta_i_max);

  grid_.mark_camera_seen(pose, scenario_.camera.frustum, scenario_.camera.mount);
  trace_.push_back({t, pose, mode_});
}

double Mission::execute_and_process(std::span<const Configuration> path) {
  const ExecutionResult result = execute_path(path, scenario_.motion, scenario_.sensor_period);
  for (std::size_t i = 0; i < result.events.size(); ++i)
    process_event(clock_ + result.events[i].t, result.events[i].pose, i == 0);
  clock_ += result.elapsed;
  xi_ = path.back();
  return result.elapsed;
}

void Mission::remesh_dirty() {
  for (auto& [id, record] : records_)
    if (record.has_unfused_data()) record.rebuild_mesh();
}

void Mission::update_patch_marks() {
  // Hash inspected face centroids, then flip any uninspected patch with an
  // inspected face nearby. Flags are sticky across remeshes.
  const double radius = 1.5 * scenario_.mesh_cell;
  const double cell = radius;
  auto key = [&](int x, int y, int z) {
    return (static_cast<std::uint64_t>(x + (1 << 20)) << 42) |
           (static_cast<std::uint64_t>(y + (1 << 20)) << 21) |
           static_cast<std::uint64_t>(z + (1 << 20));
  };
  auto cell_of = [&](const Vec3& p) {
    return std::array<int, 3>{static_cast<int>(std::floor(p.x() / cell)),
                              static_cast<int>(std::floor(p.y() / cell)),
                              static_cast<int>(std::floor(p.z() / cell))};
  };

  std::map<int, std::unordered_map<std::uint64_t, std::vector<Vec3>>> marked;
  for (const auto& [id, record] : records_) {
    const TriangleMesh& mesh = record.mesh();
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      if (!record.face_inspected(static_cast<int>(f))) continue;
      const auto c = cell_of(mesh.faces[f].centroid);
      marked[id][key(c[0], c[1], c[2])].push_back(mesh.faces[f].centroid);
    }
  }

  for (Patch& p : patches_) {
    if (p.inspected) continue;
    const auto it = marked.find(p.label);
    if (it == marked.end()) continue;
    const auto pc = cell_of(p.center);
    bool hit = false;
    for (int dz = -1; dz <= 1 && !hit; ++dz)
      for (int dy = -1; dy <= 1 && !hit; ++dy)
        for (int dx = -1; dx <= 1 && !hit; ++dx) {
          const auto bucket = it->second.find(key(pc[0] + dx, pc[1] + dy, pc[2] + dz));
          if (bucket == it->second.end()) continue;
          for (const Vec3& c : bucket->second)
            if ((c - p.center).norm() <= radius) {
              hit = true;
              break;
            }
        }
    if (hit) p.inspected = true;
  }
}

MetricsSample Mission::compute_metrics() const {
  MetricsSample m;
  m.time = clock_;
  m.explored_volume = grid_.mapped_volume();

  const double total_area = world_.total_semantic_area();
  double inspected_total = 0.0;
  std::map<int, double> inspected_by_label;
  for (const Patch& p : patches_)
    if (p.inspected) {
      inspected_total += p.area;
      inspected_by_label[p.label] += p.area;
    }
  m.cumulative_inspected_pct = total_area > 0.0 ? 100.0 * inspected_total / total_area : 0.0;

  for (const int label : world_.semantic_labels()) {
    const double denom = patch_area_by_label_.count(label) ? patch_area_by_label_.at(label) : 0.0;
    const double got = inspected_by_label.count(label) ? inspected_by_label.at(label) : 0.0;
    m.per_semantic_pct.push_back(denom > 0.0 ? 100.0 * got / denom : 0.0);
    const auto rec = records_.find(label);
    m.per_semantic_res.push_back(
        rec != records_.end() ? rec->second.mean_inspected_resolution(scenario_.camera.frustum)
                              : 0.0);
  }
  return m;
}

void Mission::sample_metrics() {
  update_patch_marks();
  metrics_.push_back(compute_metrics());
}

std::uint64_t Mission::boundary_hash(int semantic) const {
  const auto it = records_.find(semantic);
  if (it == records_.end()) return 0;
  const BoundaryInfo holes = it->second.boundary_holes();
  std::vector<std::uint64_t> keys;
  keys.reserve(holes.edges.size());
  for (const BoundaryEdge& e : holes.edges) {
    std::uint64_t h = 1469598103934665603ull;
    for (const double comp : {e.midpoint.x(), e.midpoint.y(), e.midpoint.z()}) {
      const std::int64_t q = static_cast<std::int64_t>(std::llround(comp * 1e6));
      h = (h ^ static_cast<std::uint64_t>(q)) * 1099511628211ull;
    }
    keys.push_back(h);
  }
  std::sort(keys.begin(), keys.end());
  std::uint64_t h = 1469598103934665603ull ^ keys.size();
  for (const std::uint64_t k : keys) h = (h ^ k) * 1099511628211ull;
  return h;
}

std::vector<int> Mission::lambda_h() {
  // A certified semantic re-enters only when its boundary state or the map
  // has changed since certification; otherwise retrying is a no-op and the
  // mission could never finish.
  const std::uint64_t mapped = grid_.count(VoxelState::Free) + grid_.count(VoxelState::Occupied);
  std::vector<int> out;
  for (const int id : detected_) {
    const auto it = records_.find(id);
    if (it == records_.end() || it->second.mesh().empty()) continue;
    if (it->second.boundary_holes().edges.empty()) continue;
    const auto cert = hole_certified_.find(id);
    if (cert != hole_certified_.end() && cert->second.first == boundary_hash(id) &&
        cert->second.second == mapped)
      continue;
    out.push_back(id);
  }
  return out;
}

std::vector<int> Mission::lambda_i() {
  const std::uint64_t mapped = grid_.count(VoxelState::Free) + grid_.count(VoxelState::Occupied);
  std::vector<int> out;
  for (const int id : detected_) {
    const auto it = records_.find(id);
    if (it == records_.end() || it->second.mesh().empty()) continue;
    if (it->second.uninspected_faces().empty()) continue;
    const auto seen = inspected_version_.find(id);
    if (seen != inspected_version_.end() && seen->second.first == it->second.mesh_version() &&
        seen->second.second == mapped)
      continue;
    out.push_back(id);
  }
  return out;
}

bool Mission::over_budget() {
  if (clock_ >= scenario_.time_budget) {
    mode_ = BehaviorMode::Done;
    done_reason_ = "time budget exhausted";
    return true;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start_).count();
  if (wall >= scenario_.wall_clock_cap) {
    mode_ = BehaviorMode::Done;
    wall_capped_ = true;
    done_reason_ = "wall clock cap";
    return true;
  }
  return false;
}

void Mission::enter_exploration() {
  mode_ = BehaviorMode::Exploration;
  explore_timer_ = 0.0;
  exploration_saturated_ = false;
}

void Mission::explore_step() {
  remesh_dirty();
  bool progressed = false;

  try {
    Rng graph_rng = rng_.substream(kStreamLocalGraph + step_counter_);
    const PlanGraph local = build_local_graph(grid_, xi_, world_.bounds(), scenario_.body,
                                              scenario_.motion, scenario_.explore_params(),
                                              graph_rng);
    const std::optional<ExplorationPlan> plan = plan_exploration_step(
        local, grid_, gain_mode(), scenario_.depth, scenario_.camera,
        scenario_.gain_discount, threads_);
    if (plan && plan->path.size() >= 2) {
      const double elapsed = execute_and_process(heading_aligned(plan->path));
      explore_timer_ += elapsed;
      update_global_graph(global_graph_, plan->path, grid_, scenario_.body, scenario_.motion,
                          scenario_.sparsify_radius);
      progressed = elapsed > 1e-9;
    }
  } catch (const IsolationError&) {
    // Fall through to global relocation.
  }

  if (!progressed) {
    const std::optional<ExplorationPlan> plan = relocate_to_frontier(
        global_graph_, grid_, xi_, gain_mode(), scenario_.depth, scenario_.camera,
        scenario_.body, scenario_.motion, scenario_.explore_params(), threads_);
    if (plan) {
      const double elapsed = execute_and_process(heading_aligned(plan->path));
      explore_timer_ += elapsed;
      update_global_graph(global_graph_, plan->path, grid_, scenario_.body, scenario_.motion,
                          scenario_.sparsify_radius);
      if (elapsed <= 1e-9) exploration_saturated_ = true;
    } else {
      exploration_saturated_ = true;
    }
  }
  ++step_counter_;
}

void Mission::hole_coverage_phase() {
  std::vector<int> queue = lambda_h();
  if (queue.empty()) {
    mode_ = lambda_i().empty() ? BehaviorMode::Exploration : BehaviorMode::Inspection;
    return;
  }

  // The hole-coverage graph starts from the explored-space skeleton.
  PlanGraph hole_graph = global_graph_;

  HoleCoverageHooks hooks;
  hooks.execute_path = [this](std::span<const Configuration> path) {
    return execute_and_process(heading_aligned(path));
  };
  hooks.update_mesh = [this](int id) { records_.at(id).rebuild_mesh(); };
  hooks.new_semantics_with_holes = [this]() {
    remesh_dirty();
    return lambda_h();
  };

  Rng phase_rng = rng_.substream(kStreamHolePhase + hole_phase_counter_++);
  const HoleCoverageResult result = run_hole_coverage(
      records_, queue, grid_, hole_graph, xi_, scenario_.body, scenario_.depth,
      scenario_.motion, world_.bounds(), scenario_.hole_params(), scenario_.t_hc, hooks,
      phase_rng);

  for (const HoleCoverageTraceRow& row : result.trace) hole_trace_.push_back(row);
  const std::uint64_t mapped = grid_.count(VoxelState::Free) + grid_.count(VoxelState::Occupied);
  for (const int id : result.processed) hole_certified_[id] = {boundary_hash(id), mapped};

  sample_metrics();
  mode_ = lambda_i().empty() ? BehaviorMode::Exploration : BehaviorMode::Inspection;
  if (mode_ == BehaviorMode::Exploration) enter_exploration();
}

void Mission::inspection_step() {
  const std::vector<int> targets = lambda_i();
  if (targets.empty()) {
    enter_exploration();
    return;
  }
  const int semantic = select_closest_semantic(records_, targets, xi_.position);
  if (semantic < 0) {
    enter_exploration();
    return;
  }
  SemanticRecord& record = records_.at(semantic);

  const double l_max = scenario_.l_max();
  const double theta_i_max = scenario_.theta_i_max_deg * M_PI / 180.0;

  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      Rng graph_rng = rng_.substream(kStreamInspectGraph + inspect_counter_);
      const InspectionGraph ig = build_inspection_graph(
          record, grid_, xi_, scenario_.body, scenario_.camera, l_max, theta_i_max,
          scenario_.motion, world_.bounds(), scenario_.inspect_params(), graph_rng, threads_);
      Rng plan_rng = rng_.substream(kStreamInspectPlan + inspect_counter_);
      const std::optional<InspectionPlan> plan = plan_inspection(
          ig, scenario_.k_candidates, scenario_.eta_percent, scenario_.motion, plan_rng);
      if (plan) {
        for (const InspectionCandidateDiag& d : plan->diagnostics)
          inspect_diag_.push_back({static_cast<int>(inspect_counter_), semantic, d});
        execute_and_process(plan->path);
      }
      break;
    } catch (const IsolationError&) {
      if (attempt == 1) break;
      // Move towards the semantic along the global graph and retry once.
      const std::optional<int> from =
          try_connect(global_graph_, xi_, grid_, scenario_.body, scenario_.motion,
                      scenario_.explore_params().global_connect_radius,
                      scenario_.explore_params().global_connect_neighbors);
      if (!from) break;
      const int goal = global_graph_.nearest_vertex(record.mesh().area_centroid());
      const PlanGraph::ShortestPaths sp = global_graph_.shortest_paths(*from);
      const std::vector<int> path = global_graph_.extract_path(sp, goal);
      if (path.size() < 2) break;
      execute_and_process(heading_aligned(global_graph_.configs_along(path)));
    }
  }
  ++inspect_counter_;

  inspected_version_[semantic] = {record.mesh_version(),
                                  grid_.count(VoxelState::Free) + grid_.count(VoxelState::Occupied)};
  remesh_dirty();
  sample_metrics();

  if (!lambda_h().empty())
    mode_ = BehaviorMode::HoleCoverage;
  else if (lambda_i().empty())
    enter_exploration();
}

void Mission::step() {
  initialize();
  if (mode_ == BehaviorMode::Done || over_budget()) return;

  switch (mode_) {
    case BehaviorMode::Exploration: {
      explore_step();
      sample_metrics();
      if (planner_mode_ != PlannerMode::Swap) {
        if (exploration_saturated_) {
          mode_ = BehaviorMode::Done;
          done_reason_ = "exploration gain exhausted";
        }
        return;
      }
      const bool stint_over = explore_timer_ >= scenario_.t_e || exploration_saturated_;
      if (!stint_over) return;
      if (!lambda_h().empty()) {
        mode_ = BehaviorMode::HoleCoverage;
      } else if (!lambda_i().empty()) {
        mode_ = BehaviorMode::Inspection;
      } else if (exploration_saturated_) {
        mode_ = BehaviorMode::Done;
        done_reason_ = "complete";
      }
      // Otherwise keep exploring with the timer running.
      return;
    }
    case BehaviorMode::HoleCoverage:
      hole_coverage_phase();
      return;
    case BehaviorMode::Inspection:
      inspection_step();
      return;
    case BehaviorMode::Done:
      return;
  }
}

void Mission::run() {
  initialize();
  while (mode_ != BehaviorMode::Done) step();
  if (scenario_.residual_audit) residual_ = residual_accounting();
}

ResidualReport Mission::residual_accounting() const {
  ResidualReport report;

  // Candidate observer positions: centers of Free voxels (strided) where
  // the body fits.
  const int stride = 2;
  std::vector<Vec3> candidates;
  const auto& dims = grid_.dims();
  for (int z = 0; z < dims[2]; z += stride)
    for (int y = 0; y < dims[1]; y += stride)
      for (int x = 0; x < dims[0]; x += stride) {
        const GridIndex i{x, y, z};
        if (grid_.state(i) != VoxelState::Free) continue;
        const Vec3 c = grid_.center_of(i);
        if (grid_.is_position_collision_free(c, scenario_.body)) candidates.push_back(c);
      }

  const double voxel_volume = std::pow(scenario_.voxel_size, 3);
  for (int z = 0; z < dims[2]; ++z)
    for (int y = 0; y < dims[1]; ++y)
      for (int x = 0; x < dims[0]; ++x) {
        const GridIndex i{x, y, z};
        if (grid_.state(i) != VoxelState::Unknown) continue;
        const Vec3 target = grid_.center_of(i);
        bool perceivable = false;
        for (const Vec3& c : candidates) {
          if ((c - target).norm() > scenario_.depth.frustum.max_range) continue;
          const Configuration pose(c, yaw_towards(c, target));
          if (!in_frustum(pose, scenario_.depth.frustum, scenario_.depth.mount, target)) continue;
          if (world_.segment_blocked(c, target, 0.5 * scenario_.voxel_size)) continue;
          perceivable = true;
          break;
        }
        if (!perceivable) report.residual_volume += voxel_volume;
      }

  const double l_max = scenario_.l_max();
  const double theta_i_max = scenario_.theta_i_max_deg * M_PI / 180.0;
  for (const Patch& p : patches_) {
    if (p.inspected) continue;
    bool inspectable = false;
    for (const Vec3& c : candidates) {
      const double d = (c - p.center).norm();
      if (d > l_max || d < kGeomEps) continue;
      if (viewing_angle(p.center, p.normal, c) >= theta_i_max) continue;
      const Configuration pose(c, yaw_towards(c, p.center));
      if (!in_frustum(pose, scenario_.camera.frustum, scenario_.camera.mount, p.center)) continue;
      if (world_.segment_blocked(c, p.center, scenario_.mesh_cell)) continue;
      inspectable = true;
      break;
    }
    if (!inspectable) report.residual_surface += p.area;
  }
  return report;
}

std::string Mission::metrics_csv(const std::vector<MetricsSample>& samples,
                                 const std::vector<int>& labels) {
  std::ostringstream out;
  out << "time_s,explored_volume_m3,cumulative_inspected_pct";
  for (const int label : labels) out << ",sem_" << label << "_pct";
  for (const int label : labels) out << ",sem_" << label << "_res_px_cm2";
  out << "\n";
  for (const MetricsSample& m : samples) {
    out << format_double(m.time) << "," << format_double(m.explored_volume) << ","
        << format_double(m.cumulative_inspected_pct);
    for (const double v : m.per_semantic_pct) out << "," << format_double(v);
    for (const double v : m.per_semantic_res) out << "," << format_double(v);
    out << "\n";
  }
  return out.str();
}

std::string Mission::trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream out;
  out << "time_s,x_m,y_m,z_m,yaw_rad,mode\n";
  for (const TraceRow& r : rows) {
    out << format_double(r.time) << "," << format_double(r.pose.position.x()) << ","
        << format_double(r.pose.position.y()) << "," << format_double(r.pose.position.z()) << ","
        << format_double(r.pose.yaw) << "," << to_string(r.mode) << "\n";
  }
  return out.str();
}

void Mission::write_bundle(const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream f(out_dir / "metrics.csv", std::ios::binary);
    f << metrics_csv(metrics_, world_.semantic_labels());
  }
  {
    std::ofstream f(out_dir / "trace.csv", std::ios::binary);
    f << trace_csv(trace_);
  }
  {
    std::ofstream f(out_dir / "hole_trace.csv", std::ios::binary);
    f << "iteration,semantic,x_m,y_m,z_m,yaw_rad,theta_v_rad,edges_before,edges_after\n";
    for (const HoleCoverageTraceRow& r : hole_trace_) {
      f << r.iteration << "," << r.semantic << "," << format_double(r.viewpoint.position.x())
        << "," << format_double(r.viewpoint.position.y()) << ","
        << format_double(r.viewpoint.position.z()) << "," << format_double(r.viewpoint.yaw)
        << "," << format_double(r.viewing_angle) << "," << r.edges_before << ","
        << r.edges_after << "\n";
    }
  }
  {
    std::ofstream f(out_dir / "inspection_candidates.csv", std::ios::binary);
    f << "call,semantic,candidate,coverage_size,cost_s\n";
    for (const InspectionDiagRow& r : inspect_diag_) {
      f << r.call << "," << r.semantic << "," << r.diag.candidate << "," << r.diag.coverage_size
        << "," << format_double(r.diag.cost) << "\n";
    }
  }
  for (const auto& [id, record] : records_)
    record.write_ply(out_dir / ("semantic_" + std::to_string(id) + ".ply"));
  grid_.save_snapshot(out_dir / "grid.bin");

  nlohmann::json manifest;
  manifest["library_version"] = kVersion;
  manifest["planner_mode"] = to_string(planner_mode_);
  manifest["seed"] = scenario_.seed;
  manifest["threads"] = threads_;
  manifest["scenario"] = nlohmann::json::parse(scenario_.to_json_string());
  manifest["derived"]["l_max_m"] = scenario_.l_max();
  manifest["result"]["sim_time_s"] = clock_;
  manifest["result"]["done_reason"] = done_reason_;
  manifest["result"]["wall_capped"] = wall_capped_;
  if (!metrics_.empty()) {
    const MetricsSample& last = metrics_.back();
    manifest["result"]["explored_volume_m3"] = last.explored_volume;
    manifest["result"]["cumulative_inspected_pct"] = last.cumulative_inspected_pct;
    const auto& labels = world_.semantic_labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      manifest["result"]["per_semantic"][std::to_string(labels[i])] = {
          {"inspected_pct", last.per_semantic_pct[i]},
          {"mean_resolution_px_cm2", last.per_semantic_res[i]}};
    }
  }
  if (residual_) {
    manifest["result"]["residual_volume_m3"] = residual_->residual_volume;
    manifest["result"]["residual_surface_m2"] = residual_->residual_surface;
  }
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start_).count();
  std::ofstream f(out_dir / "manifest.json", std::ios::binary);
  f << manifest.dump(2) << "\n";
}

}  // namespace semcover

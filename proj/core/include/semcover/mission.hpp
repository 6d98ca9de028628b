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

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "semcover/scenario.hpp"

namespace semcover {

inline constexpr const char* kVersion = "0.1.0";

// Which planner drives the mission: the full behavior-switching planner, the
// purely volumetric baseline, or the surface-gain baseline.
enum class PlannerMode { Swap, ExploreOnly, SurfaceGain };

enum class BehaviorMode { Exploration, HoleCoverage, Inspection, Done };

const char* to_string(PlannerMode mode);
const char* to_string(BehaviorMode mode);
std::optional<PlannerMode> planner_mode_from_string(const std::string& name);

struct MetricsSample {
  double time = 0.0;
  double explored_volume = 0.0;          // m^3 of Free + Occupied voxels
  double cumulative_inspected_pct = 0.0;  // over all ground-truth semantic area
  std::vector<double> per_semantic_pct;   // aligned with world semantic labels
  std::vector<double> per_semantic_res;   // mean achieved px/cm^2
};

struct TraceRow {
  double time = 0.0;
  Configuration pose;
  BehaviorMode mode = BehaviorMode::Exploration;
};

struct ResidualReport {
  double residual_volume = 0.0;   // m^3 of unperceivable unknown space
  double residual_surface = 0.0;  // m^2 of uninspectable semantic surface
};

// Headless mission: owns the world, the map, the semantic records and the
// behavior state machine, and drives the planners to completion.
class Mission {
 public:
  Mission(const Scenario& scenario, PlannerMode mode, std::uint64_t seed, int threads = 1);

  BehaviorMode mode() const { return mode_; }
  double clock() const { return clock_; }
  bool done() const { return mode_ == BehaviorMode::Done; }
  const std::string& done_reason() const { return done_reason_; }

  // One behavior iteration: an exploration step, a full hole-coverage
  // phase, or one semantic inspection.
  void step();
  void run();

  MetricsSample compute_metrics() const;
  ResidualReport residual_accounting() const;

  void write_bundle(const std::filesystem::path& out_dir);

  // Introspection (used by the CLI and the test suites).
  const World& world() const { return world_; }
  const OccupancyGrid& grid() const { return grid_; }
  const std::map<int, SemanticRecord>& records() const { return records_; }
  const Configuration& position() const { return xi_; }
  const std::vector<MetricsSample>& metrics_log() const { return metrics_; }
  const std::vector<TraceRow>& trace() const { return trace_; }
  const std::vector<HoleCoverageTraceRow>& hole_trace() const { return hole_trace_; }
  std::vector<int> detected() const { return {detected_.begin(), detected_.end()}; }
  std::vector<int> lambda_h();
  std::vector<int> lambda_i();
  bool wall_capped() const { return wall_capped_; }

  static std::string metrics_csv(const std::vector<MetricsSample>& samples,
                                 const std::vector<int>& labels);
  static std::string trace_csv(const std::vector<TraceRow>& rows);

 private:
  void initialize();
  void process_event(double t, const Configuration& pose, bool first_of_path);
  double execute_and_process(std::span<const Configuration> path);
  void remesh_dirty();
  void update_patch_marks();
  void sample_metrics();
  GainMode gain_mode() const;
  void explore_step();
  void hole_coverage_phase();
  void inspection_step();
  void enter_exploration();
  bool over_budget();
  std::uint64_t boundary_hash(int semantic) const;

  Scenario scenario_;
  PlannerMode planner_mode_;
  int threads_;
  Rng rng_;

  World world_;
  OccupancyGrid grid_;
  std::map<int, SemanticRecord> records_;
  std::set<int> detected_;

  Configuration xi_;
  double clock_ = 0.0;
  BehaviorMode mode_ = BehaviorMode::Exploration;
  double explore_timer_ = 0.0;
  bool exploration_saturated_ = false;
  bool initialized_ = false;
  bool wall_capped_ = false;
  std::string done_reason_;

  PlanGraph global_graph_;

  // Re-entry guards: (boundary state, mapped-voxel count) at certification
  // and (mesh version, mapped-voxel count) at the last inspection pass. A
  // semantic re-enters its queue when either component changes.
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> hole_certified_;
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> inspected_version_;

  // Ground-truth surface accounting (sticky per-patch inspection flags).
  struct Patch {
    Vec3 center;
    Vec3 normal;
    double area = 0.0;
    int label = 0;
    bool inspected = false;
  };
  std::vector<Patch> patches_;
  std::map<int, double> patch_area_by_label_;

  std::uint64_t step_counter_ = 0;
  std::uint64_t hole_phase_counter_ = 0;
  std::uint64_t inspect_counter_ = 0;

  std::vector<MetricsSample> metrics_;
  std::vector<TraceRow> trace_;
  std::vector<HoleCoverageTraceRow> hole_trace_;
  struct InspectionDiagRow {
    int call = 0;
    int semantic = -1;
    InspectionCandidateDiag diag;
  };
  std::vector<InspectionDiagRow> inspect_diag_;

  std::chrono::steady_clock::time_point wall_start_;
  std::optional<ResidualReport> residual_;
};

}  // namespace semcover

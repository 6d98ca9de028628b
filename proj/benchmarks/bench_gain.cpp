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

#include <benchmark/benchmark.h>

#include "semcover/rng.hpp"
#include "semcover/voxel_grid.hpp"

namespace {

using namespace semcover;

OccupancyGrid make_grid(int n, double fill_occupied) {
  OccupancyGrid grid(Vec3::Zero(), 0.4, {n, n, n});
  Rng rng(9001);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double u = rng.uniform();
        VoxelState s = VoxelState::Unknown;
        if (u < 0.5)
          s = VoxelState::Free;
        else if (u < 0.5 + fill_occupied)
          s = VoxelState::Occupied;
        grid.set_state({x, y, z}, s);
      }
  return grid;
}

void BM_VolumetricGain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OccupancyGrid grid = make_grid(n, 0.05);
  FrustumModel depth;
  depth.fov_h_deg = 360;
  depth.fov_v_deg = 90;
  depth.max_range = 8;
  const Configuration pose(0.2 * n, 0.2 * n, 0.2 * n, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid.volumetric_gain(pose, depth));
  }
}
BENCHMARK(BM_VolumetricGain)->Arg(20)->Arg(40);

void BM_SurfaceGain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OccupancyGrid grid = make_grid(n, 0.05);
  FrustumModel camera;
  camera.fov_h_deg = 120;
  camera.fov_v_deg = 110;
  camera.max_range = 7;
  const Configuration pose(0.2 * n, 0.2 * n, 0.2 * n, -1.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid.surface_gain(pose, camera));
  }
}
BENCHMARK(BM_SurfaceGain)->Arg(20)->Arg(40);

void BM_IntegrateScan(benchmark::State& state) {
  FrustumModel depth;
  depth.fov_h_deg = 360;
  depth.fov_v_deg = 90;
  depth.max_range = 8;
  std::vector<DepthHit> hits;
  Rng rng(3);
  for (int i = 0; i < 32400; ++i) {
    Vec3 dir(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (dir.norm() < 1e-6) dir = Vec3::UnitX();
    dir.normalize();
    hits.push_back({Vec3(4, 4, 4) + 6.0 * dir, true});
  }
  const Configuration pose(4, 4, 4, 0);
  for (auto _ : state) {
    OccupancyGrid grid(Vec3::Zero(), 0.4, {20, 20, 20});
    grid.integrate_depth_scan(pose, hits);
    benchmark::DoNotOptimize(grid.count(VoxelState::Free));
  }
}
BENCHMARK(BM_IntegrateScan);

}  // namespace

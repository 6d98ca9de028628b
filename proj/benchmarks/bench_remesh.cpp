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
#include "semcover/semantic_model.hpp"

namespace {

using namespace semcover;

void BM_RebuildMesh(benchmark::State& state) {
  SemanticModelParams params;
  params.subsample_cell = 0.1;
  params.mesh_cell = 0.1;
  params.truncation = 0.2;

  SemanticRecord record(1, params);
  // Scans of one box face from a fixed sensor.
  Rng rng(17);
  std::vector<Vec3> pts;
  for (int i = 0; i < 4000; ++i)
    pts.emplace_back(rng.uniform(0, 2), rng.uniform(0, 2), 0.0);
  record.accumulate_points(Vec3(1, 1, 2), pts);

  for (auto _ : state) {
    record.rebuild_mesh();
    benchmark::DoNotOptimize(record.mesh().faces.size());
  }
}
BENCHMARK(BM_RebuildMesh);

void BM_BoundaryExtraction(benchmark::State& state) {
  SemanticModelParams params;
  params.mesh_cell = 0.05;
  params.truncation = 0.1;
  SemanticRecord record(1, params);
  Rng rng(18);
  std::vector<Vec3> pts;
  for (int i = 0; i < 8000; ++i)
    pts.emplace_back(rng.uniform(0, 2), rng.uniform(0, 2), 0.0);
  record.accumulate_points(Vec3(1, 1, 2), pts);
  record.rebuild_mesh();

  for (auto _ : state) {
    benchmark::DoNotOptimize(record.boundary_all().edges.size());
  }
}
BENCHMARK(BM_BoundaryExtraction);

}  // namespace

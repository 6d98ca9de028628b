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
#include "semcover/tsp.hpp"

#include <cmath>

namespace {

using namespace semcover;

void BM_OpenTour(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(rng.uniform(0, 20), rng.uniform(0, 20));
  std::vector<double> depot(n);
  std::vector<std::vector<double>> pair(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    depot[i] = std::hypot(pts[i].first, pts[i].second);
    for (int j = 0; j < n; ++j)
      pair[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_open_tour(depot, pair));
  }
}
BENCHMARK(BM_OpenTour)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

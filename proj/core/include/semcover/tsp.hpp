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

#include <vector>

namespace semcover {

struct TspResult {
  std::vector<int> order;  // permutation of 0..n-1
  double cost = 0.0;
};

// Open tour from a fixed depot through all n nodes (no return leg):
// cost = depot_cost[order[0]] + sum of pair_cost along the order.
// Nearest-neighbor construction followed by 2-opt and Or-opt (segment
// lengths 1-3) local search until no improving move remains. The result
// never costs more than the nearest-neighbor construction.
TspResult solve_open_tour(const std::vector<double>& depot_cost,
                          const std::vector<std::vector<double>>& pair_cost);

double open_tour_cost(const std::vector<int>& order, const std::vector<double>& depot_cost,
                      const std::vector<std::vector<double>>& pair_cost);

}  // namespace semcover

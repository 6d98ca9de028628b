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

#include "semcover/tsp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace semcover {

double open_tour_cost(const std::vector<int>& order, const std::vector<double>& depot_cost,
                      const std::vector<std::vector<double>>& pair_cost) {
  if (order.empty()) return 0.0;
  double c = depot_cost[order.front()];
  for (std::size_t i = 1; i < order.size(); ++i) c += pair_cost[order[i - 1]][order[i]];
  return c;
}

namespace {

std::vector<int> nearest_neighbor_order(const std::vector<double>& depot_cost,
                                        const std::vector<std::vector<double>>& pair_cost,
                                        int forced_first) {
  const int n = static_cast<int>(depot_cost.size());
  std::vector<int> order;
  order.reserve(n);
  std::vector<bool> used(n, false);
  if (forced_first >= 0) {
    used[forced_first] = true;
    order.push_back(forced_first);
  }
  while (static_cast<int>(order.size()) < n) {
    int best = -1;
    double best_c = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double c = order.empty() ? depot_cost[i] : pair_cost[order.back()][i];
      if (c < best_c) {
        best_c = c;
        best = i;
      }
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

void local_search(std::vector<int>& order, const std::vector<double>& depot_cost,
                  const std::vector<std::vector<double>>& pair_cost) {
  const int n = static_cast<int>(order.size());
  auto leg = [&](int from_pos, int node) {
    return from_pos < 0 ? depot_cost[node] : pair_cost[order[from_pos]][node];
  };

  bool improved = true;
  while (improved) {
    improved = false;

    // 2-opt: reverse order[i..j]. Edges (i-1 -> i) and (j -> j+1) become
    // (i-1 -> j) and (i -> j+1); interior legs are symmetric.
    for (int i = 0; i < n - 1 && !improved; ++i) {
      for (int j = i + 1; j < n && !improved; ++j) {
        double delta = leg(i - 1, order[j]) - leg(i - 1, order[i]);
        if (j + 1 < n)
          delta += pair_cost[order[i]][order[j + 1]] - pair_cost[order[j]][order[j + 1]];
        if (delta < -1e-12) {
          std::reverse(order.begin() + i, order.begin() + j + 1);
          improved = true;
        }
      }
    }
    if (improved) continue;

    // Or-opt: relocate a segment of length 1-3 (same direction).
    for (int len = 1; len <= 3 && !improved; ++len) {
      for (int i = 0; i + len <= n && !improved; ++i) {
        std::vector<int> seg(order.begin() + i, order.begin() + i + len);
        std::vector<int> rest = order;
        rest.erase(rest.begin() + i, rest.begin() + i + len);
        const double base = open_tour_cost(order, depot_cost, pair_cost);
        for (int k = 0; k <= static_cast<int>(rest.size()); ++k) {
          if (k == i) continue;
          std::vector<int> trial = rest;
          trial.insert(trial.begin() + k, seg.begin(), seg.end());
          if (open_tour_cost(trial, depot_cost, pair_cost) < base - 1e-12) {
            order = std::move(trial);
            improved = true;
            break;
          }
        }
      }
    }
  }
}

}  // namespace

TspResult solve_open_tour(const std::vector<double>& depot_cost,
                          const std::vector<std::vector<double>>& pair_cost) {
  const int n = static_cast<int>(depot_cost.size());
  if (n == 0) return {};
  if (pair_cost.size() != depot_cost.size())
    throw std::invalid_argument("solve_open_tour: matrix size mismatch");

  // Plain NN from the depot, plus (for small instances) NN restarted from
  // every possible first node; each candidate is polished by local search.
  std::vector<int> best_order;
  double best_cost = std::numeric_limits<double>::infinity();
  const int restarts = n <= 16 ? n : 0;
  for (int start = -1; start < restarts; ++start) {
    std::vector<int> order = nearest_neighbor_order(depot_cost, pair_cost, start);
    local_search(order, depot_cost, pair_cost);
    const double cost = open_tour_cost(order, depot_cost, pair_cost);
    if (cost < best_cost - 1e-12) {
      best_cost = cost;
      best_order = std::move(order);
    }
  }
  return {best_order, best_cost};
}

}  // namespace semcover

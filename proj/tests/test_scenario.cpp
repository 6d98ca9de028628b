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

#include "semcover/scenario.hpp"

#include <string>

#include <doctest.h>

using namespace semcover;

namespace {

const char* kMinimal = R"({
  "world": { "bounds": { "min": [0,0,0], "max": [10,8,4] } },
  "start": { "position": [1,1,1] }
})";

}  // namespace

TEST_CASE("minimal scenario parses with documented defaults") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK(s.bounds.max.x() == 10.0);
  CHECK(s.shell);
  CHECK(s.voxel_size == 0.4);
  CHECK(s.subsample_cell == doctest::Approx(0.2));   // half voxel
  CHECK(s.mesh_cell == doctest::Approx(0.2));
  CHECK(s.truncation == doctest::Approx(0.4));       // twice mesh cell
  CHECK(s.hole_perimeter_min == doctest::Approx(1.2));  // three voxels
  CHECK(s.theta_i_max_deg == 45.0);
  CHECK(s.theta_h_max_deg == 75.0);
  CHECK(s.t_e == 20.0);
  CHECK(s.depth.frustum.fov_h_deg == 360.0);
  CHECK(s.camera.frustum.has_pixels());
  CHECK(s.l_max() > 0.0);

  const World world = s.build_world();
  CHECK(world.triangles().size() == 12);  // shell only
  CHECK(world.semantic_labels().empty());
}

TEST_CASE("unknown keys are rejected with their path") {
  const std::string bad = R"({
    "world": { "bounds": { "min": [0,0,0], "max": [10,8,4] }, "bogus": 1 },
    "start": { "position": [1,1,1] }
  })";
  CHECK_THROWS_WITH_AS(parse_scenario(bad), doctest::Contains("bogus"), ScenarioError);

  const std::string bad_nested = R"({
    "world": { "bounds": { "min": [0,0,0], "max": [10,8,4] } },
    "start": { "position": [1,1,1] },
    "planner": { "t_e": 20.0, "tee": 1.0 }
  })";
  CHECK_THROWS_WITH_AS(parse_scenario(bad_nested), doctest::Contains("tee"), ScenarioError);
}

TEST_CASE("syntax errors report line and column") {
  const std::string broken = "{\n  \"world\": {\n  \"oops\n}";
  try {
    parse_scenario(broken);
    FAIL("expected a parse error");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("validation: bounds, labels, start containment") {
  CHECK_THROWS_AS(parse_scenario(R"({
    "world": { "bounds": { "min": [0,0,0], "max": [0,8,4] } },
    "start": { "position": [0,1,1] }
  })"),
                  ScenarioError);

  // Start outside bounds.
  CHECK_THROWS_AS(parse_scenario(R"({
    "world": { "bounds": { "min": [0,0,0], "max": [10,8,4] } },
    "start": { "position": [11,1,1] }
  })"),
                  ScenarioError);

  // Semantic labels must be contiguous from 1.
  CHECK_THROWS_AS(parse_scenario(R"({
    "world": { "bounds": { "min": [0,0,0], "max": [10,8,4] },
               "boxes": [ { "min": [1,1,1], "max": [2,2,2], "label": 2 } ] },
    "start": { "position": [5,5,1] }
  })"),
                  ScenarioError);
}

TEST_CASE("bundled scenarios load and build worlds") {
  for (const char* name : {"two_box.json", "occluded_box.json", "empty_room.json"}) {
    const Scenario s = load_scenario(std::string(SEMCOVER_SCENARIO_DIR) + "/" + name);
    const World world = s.build_world();
    CHECK_FALSE(world.triangles().empty());
    CHECK(s.bounds.contains(s.start.position));
    if (std::string(name) == "two_box.json") {
      CHECK(world.semantic_labels() == std::vector<int>{1, 2});
      CHECK(world.total_semantic_area() == doctest::Approx(48.0));
    }
  }
}

TEST_CASE("manifest dump round-trips through the strict parser") {
  const Scenario s = load_scenario(std::string(SEMCOVER_SCENARIO_DIR) + "/two_box.json");
  const Scenario back = parse_scenario(s.to_json_string());
  CHECK(back.name == s.name);
  CHECK(back.voxel_size == s.voxel_size);
  CHECK(back.boxes.size() == s.boxes.size());
  CHECK(back.seed == s.seed);
  CHECK(back.r_min_px_cm2 == s.r_min_px_cm2);
  CHECK(back.start.position == s.start.position);
  CHECK(back.l_max() == doctest::Approx(s.l_max()));
}

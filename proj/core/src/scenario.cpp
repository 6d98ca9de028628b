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

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace semcover {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError("scenario: " + path + ": " + what);
}

void expect_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  double fallback, bool* present = nullptr) {
  if (!obj.contains(key)) {
    if (present) *present = false;
    return fallback;
  }
  if (present) *present = true;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

Vec3 get_vec3(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path, "missing key '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number())
    fail(path + "." + key, "expected an array of 3 numbers");
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

Vec3 get_vec3_or(const json& obj, const std::string& path, const std::string& key,
                 const Vec3& fallback) {
  if (!obj.contains(key)) return fallback;
  return get_vec3(obj, path, key);
}

}  // namespace

World Scenario::build_world() const {
  std::vector<WorldTriangle> tris;
  if (shell) append_room_shell(tris, bounds, 0);
  for (const ScenarioBox& b : boxes) {
    const Mat3 rot =
        Eigen::AngleAxisd(b.yaw_deg * M_PI / 180.0, Vec3::UnitZ()).toRotationMatrix();
    append_box(tris, b.box, rot, b.label);
  }
  for (const WorldTriangle& t : extra_triangles) tris.push_back(t);
  return World(bounds, std::move(tris));
}

SemanticModelParams Scenario::semantic_params() const {
  SemanticModelParams p;
  p.subsample_cell = subsample_cell;
  p.mesh_cell = mesh_cell;
  p.truncation = truncation;
  p.min_hole_perimeter = hole_perimeter_min;
  p.anchor = bounds.min;
  return p;
}

ExploreParams Scenario::explore_params() const {
  ExploreParams p;
  p.local_box_extent = local_box;
  p.graph.samples = local_samples;
  p.graph.max_neighbors = local_neighbors;
  p.graph.connection_radius = connection_radius;
  p.gain_discount = gain_discount;
  p.sparsify_radius = sparsify_radius;
  return p;
}

HolePlannerParams Scenario::hole_params() const {
  HolePlannerParams p;
  p.samples_per_edge = samples_per_edge;
  p.d_v_max = d_v_max;
  p.theta_v_max = theta_h_max_deg * M_PI / 180.0;
  p.connect_radius = hole_connect_radius;
  p.connect_neighbors = local_neighbors;
  p.visibility_slack = voxel_size;
  return p;
}

InspectParams Scenario::inspect_params() const {
  InspectParams p;
  p.samples = inspect_samples;
  p.graph.samples = inspect_samples;
  p.graph.max_neighbors = local_neighbors;
  p.graph.connection_radius = connection_radius;
  p.eta_percent = eta_percent;
  p.k_candidates = k_candidates;
  p.occlusion_slack = voxel_size;
  return p;
}

double Scenario::l_max() const { return max_view_distance(r_min_px_cm2, camera.frustum); }

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line/column pair.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "scenario: parse error at line " << line << ", column " << col << ": " << e.what();
    throw ScenarioError(msg.str());
  }

  Scenario s;
  // Documented sensor defaults; overridden field-by-field below.
  s.depth.frustum = {360.0, 90.0, 8.0, 0, 0};
  s.depth.res_h_deg = 1.0;
  s.depth.res_v_deg = 1.0;
  s.camera.frustum = {120.0, 110.0, 7.0, 960, 800};

  expect_keys(root, "$",
              {"name", "world", "start", "robot", "sensors", "mapping", "planner", "mission"});

  if (root.contains("name")) {
    if (!root["name"].is_string()) fail("$.name", "expected a string");
    s.name = root["name"].get<std::string>();
  }

  if (!root.contains("world")) fail("$", "missing key 'world'");
  {
    const json& w = root["world"];
    expect_keys(w, "$.world", {"bounds", "shell", "boxes", "triangles"});
    if (!w.contains("bounds")) fail("$.world", "missing key 'bounds'");
    expect_keys(w["bounds"], "$.world.bounds", {"min", "max"});
    s.bounds.min = get_vec3(w["bounds"], "$.world.bounds", "min");
    s.bounds.max = get_vec3(w["bounds"], "$.world.bounds", "max");
    if ((s.bounds.extent().array() <= 0.0).any()) fail("$.world.bounds", "empty volume");
    s.shell = get_bool(w, "$.world", "shell", true);

    if (w.contains("boxes")) {
      if (!w["boxes"].is_array()) fail("$.world.boxes", "expected an array");
      int idx = 0;
      for (const json& b : w["boxes"]) {
        const std::string path = "$.world.boxes[" + std::to_string(idx++) + "]";
        expect_keys(b, path, {"min", "max", "label", "yaw_deg"});
        ScenarioBox sb;
        sb.box.min = get_vec3(b, path, "min");
        sb.box.max = get_vec3(b, path, "max");
        if ((sb.box.extent().array() <= 0.0).any()) fail(path, "empty box");
        sb.label = get_int(b, path, "label", 0);
        if (sb.label < 0) fail(path + ".label", "labels must be >= 0");
        sb.yaw_deg = get_number(b, path, "yaw_deg", 0.0);
        s.boxes.push_back(sb);
      }
    }
    if (w.contains("triangles")) {
      if (!w["triangles"].is_array()) fail("$.world.triangles", "expected an array");
      int idx = 0;
      for (const json& t : w["triangles"]) {
        const std::string path = "$.world.triangles[" + std::to_string(idx++) + "]";
        expect_keys(t, path, {"a", "b", "c", "label"});
        WorldTriangle tri;
        tri.a = get_vec3(t, path, "a");
        tri.b = get_vec3(t, path, "b");
        tri.c = get_vec3(t, path, "c");
        tri.label = get_int(t, path, "label", 0);
        if (tri.label < 0) fail(path + ".label", "labels must be >= 0");
        s.extra_triangles.push_back(tri);
      }
    }
  }

  if (!root.contains("start")) fail("$", "missing key 'start'");
  {
    const json& st = root["start"];
    expect_keys(st, "$.start", {"position", "yaw_deg"});
    const Vec3 p = get_vec3(st, "$.start", "position");
    s.start = Configuration(p, get_number(st, "$.start", "yaw_deg", 0.0) * M_PI / 180.0);
    if (!s.bounds.contains(p)) fail("$.start.position", "outside world bounds");
  }

  if (root.contains("robot")) {
    const json& r = root["robot"];
    expect_keys(r, "$.robot", {"body", "speed", "yaw_rate"});
    s.body.size = get_vec3_or(r, "$.robot", "body", s.body.size);
    if ((s.body.size.array() <= 0.0).any()) fail("$.robot.body", "body dimensions must be positive");
    s.motion.speed = get_number(r, "$.robot", "speed", s.motion.speed);
    s.motion.yaw_rate = get_number(r, "$.robot", "yaw_rate", s.motion.yaw_rate);
    if (!(s.motion.speed > 0.0) || !(s.motion.yaw_rate > 0.0))
      fail("$.robot", "speed and yaw_rate must be positive");
  }

  if (root.contains("sensors")) {
    const json& sensors = root["sensors"];
    expect_keys(sensors, "$.sensors", {"depth", "camera"});
    if (sensors.contains("depth")) {
      const json& d = sensors["depth"];
      expect_keys(d, "$.sensors.depth",
                  {"fov_h_deg", "fov_v_deg", "max_range", "res_h_deg", "res_v_deg"});
      s.depth.frustum.fov_h_deg = get_number(d, "$.sensors.depth", "fov_h_deg", s.depth.frustum.fov_h_deg);
      s.depth.frustum.fov_v_deg = get_number(d, "$.sensors.depth", "fov_v_deg", s.depth.frustum.fov_v_deg);
      s.depth.frustum.max_range = get_number(d, "$.sensors.depth", "max_range", s.depth.frustum.max_range);
      s.depth.res_h_deg = get_number(d, "$.sensors.depth", "res_h_deg", s.depth.res_h_deg);
      s.depth.res_v_deg = get_number(d, "$.sensors.depth", "res_v_deg", s.depth.res_v_deg);
    }
    if (sensors.contains("camera")) {
      const json& c = sensors["camera"];
      expect_keys(c, "$.sensors.camera",
                  {"fov_h_deg", "fov_v_deg", "max_range", "width", "height"});
      s.camera.frustum.fov_h_deg = get_number(c, "$.sensors.camera", "fov_h_deg", s.camera.frustum.fov_h_deg);
      s.camera.frustum.fov_v_deg = get_number(c, "$.sensors.camera", "fov_v_deg", s.camera.frustum.fov_v_deg);
      s.camera.frustum.max_range = get_number(c, "$.sensors.camera", "max_range", s.camera.frustum.max_range);
      s.camera.frustum.width = get_int(c, "$.sensors.camera", "width", s.camera.frustum.width);
      s.camera.frustum.height = get_int(c, "$.sensors.camera", "height", s.camera.frustum.height);
    }
  }
  s.depth.frustum.validate();
  s.camera.frustum.validate();
  if (!s.camera.frustum.has_pixels()) fail("$.sensors.camera", "camera needs width and height");

  {
    const json mapping = root.contains("mapping") ? root["mapping"] : json::object();
    expect_keys(mapping, "$.mapping",
                {"voxel_size", "subsample_cell", "mesh_cell", "truncation", "hole_perimeter_min"});
    s.voxel_size = get_number(mapping, "$.mapping", "voxel_size", 0.4);
    if (!(s.voxel_size > 0.0)) fail("$.mapping.voxel_size", "must be positive");
    s.subsample_cell = get_number(mapping, "$.mapping", "subsample_cell", 0.5 * s.voxel_size);
    s.mesh_cell = get_number(mapping, "$.mapping", "mesh_cell", 0.5 * s.voxel_size);
    s.truncation = get_number(mapping, "$.mapping", "truncation", 2.0 * s.mesh_cell);
    s.hole_perimeter_min = get_number(mapping, "$.mapping", "hole_perimeter_min", 3.0 * s.voxel_size);
  }

  {
    const json planner = root.contains("planner") ? root["planner"] : json::object();
    expect_keys(planner, "$.planner",
                {"r_min_px_cm2", "theta_i_max_deg", "theta_h_max_deg", "k_candidates",
                 "eta_percent", "t_e", "t_hc", "d_v_max", "samples_per_edge", "local_box",
                 "local_samples", "local_neighbors", "connection_radius", "sparsify_radius",
                 "gain_discount", "inspect_samples", "hole_connect_radius"});
    s.r_min_px_cm2 = get_number(planner, "$.planner", "r_min_px_cm2", s.r_min_px_cm2);
    if (!(s.r_min_px_cm2 > 0.0)) fail("$.planner.r_min_px_cm2", "must be positive");
    s.theta_i_max_deg = get_number(planner, "$.planner", "theta_i_max_deg", s.theta_i_max_deg);
    s.theta_h_max_deg = get_number(planner, "$.planner", "theta_h_max_deg", s.theta_h_max_deg);
    s.k_candidates = get_int(planner, "$.planner", "k_candidates", s.k_candidates);
    s.eta_percent = get_number(planner, "$.planner", "eta_percent", s.eta_percent);
    s.t_e = get_number(planner, "$.planner", "t_e", s.t_e);
    s.t_hc = get_number(planner, "$.planner", "t_hc", s.t_hc);
    s.d_v_max = get_number(planner, "$.planner", "d_v_max", s.d_v_max);
    s.samples_per_edge = get_int(planner, "$.planner", "samples_per_edge", s.samples_per_edge);
    s.local_box = get_vec3_or(planner, "$.planner", "local_box", s.local_box);
    s.local_samples = get_int(planner, "$.planner", "local_samples", s.local_samples);
    s.local_neighbors = get_int(planner, "$.planner", "local_neighbors", s.local_neighbors);
    s.connection_radius = get_number(planner, "$.planner", "connection_radius", s.connection_radius);
    s.sparsify_radius = get_number(planner, "$.planner", "sparsify_radius", s.sparsify_radius);
    s.gain_discount = get_number(planner, "$.planner", "gain_discount", s.gain_discount);
    s.inspect_samples = get_int(planner, "$.planner", "inspect_samples", s.inspect_samples);
    s.hole_connect_radius =
        get_number(planner, "$.planner", "hole_connect_radius", s.hole_connect_radius);
  }

  {
    const json mission = root.contains("mission") ? root["mission"] : json::object();
    expect_keys(mission, "$.mission",
                {"sensor_period", "time_budget", "wall_clock_cap", "seed", "residual_audit"});
    s.sensor_period = get_number(mission, "$.mission", "sensor_period", s.sensor_period);
    if (!(s.sensor_period > 0.0)) fail("$.mission.sensor_period", "must be positive");
    s.time_budget = get_number(mission, "$.mission", "time_budget", s.time_budget);
    if (s.time_budget < 0.0) fail("$.mission.time_budget", "must be >= 0");
    s.wall_clock_cap = get_number(mission, "$.mission", "wall_clock_cap", s.wall_clock_cap);
    if (mission.contains("seed")) {
      if (!mission["seed"].is_number_unsigned() && !mission["seed"].is_number_integer())
        fail("$.mission.seed", "expected an integer");
      s.seed = mission["seed"].get<std::uint64_t>();
    }
    s.residual_audit = get_bool(mission, "$.mission", "residual_audit", s.residual_audit);
  }

  // Semantic labels must form a contiguous 1..N set.
  std::set<int> labels;
  for (const ScenarioBox& b : s.boxes)
    if (b.label > 0) labels.insert(b.label);
  for (const WorldTriangle& t : s.extra_triangles)
    if (t.label > 0) labels.insert(t.label);
  int expect = 1;
  for (const int l : labels) {
    if (l != expect++) fail("$.world", "semantic labels must be contiguous starting at 1");
  }

  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("scenario: cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string Scenario::to_json_string() const {
  json j;
  j["name"] = name;
  j["world"]["bounds"]["min"] = {bounds.min.x(), bounds.min.y(), bounds.min.z()};
  j["world"]["bounds"]["max"] = {bounds.max.x(), bounds.max.y(), bounds.max.z()};
  j["world"]["shell"] = shell;
  j["world"]["boxes"] = json::array();
  for (const ScenarioBox& b : boxes) {
    json jb;
    jb["min"] = {b.box.min.x(), b.box.min.y(), b.box.min.z()};
    jb["max"] = {b.box.max.x(), b.box.max.y(), b.box.max.z()};
    jb["label"] = b.label;
    jb["yaw_deg"] = b.yaw_deg;
    j["world"]["boxes"].push_back(jb);
  }
  j["world"]["triangles"] = json::array();
  for (const WorldTriangle& t : extra_triangles) {
    json jt;
    jt["a"] = {t.a.x(), t.a.y(), t.a.z()};
    jt["b"] = {t.b.x(), t.b.y(), t.b.z()};
    jt["c"] = {t.c.x(), t.c.y(), t.c.z()};
    jt["label"] = t.label;
    j["world"]["triangles"].push_back(jt);
  }
  j["start"]["position"] = {start.position.x(), start.position.y(), start.position.z()};
  j["start"]["yaw_deg"] = start.yaw * 180.0 / M_PI;
  j["robot"]["body"] = {body.size.x(), body.size.y(), body.size.z()};
  j["robot"]["speed"] = motion.speed;
  j["robot"]["yaw_rate"] = motion.yaw_rate;
  j["sensors"]["depth"] = {{"fov_h_deg", depth.frustum.fov_h_deg},
                           {"fov_v_deg", depth.frustum.fov_v_deg},
                           {"max_range", depth.frustum.max_range},
                           {"res_h_deg", depth.res_h_deg},
                           {"res_v_deg", depth.res_v_deg}};
  j["sensors"]["camera"] = {{"fov_h_deg", camera.frustum.fov_h_deg},
                            {"fov_v_deg", camera.frustum.fov_v_deg},
                            {"max_range", camera.frustum.max_range},
                            {"width", camera.frustum.width},
                            {"height", camera.frustum.height}};
  j["mapping"] = {{"voxel_size", voxel_size},
                  {"subsample_cell", subsample_cell},
                  {"mesh_cell", mesh_cell},
                  {"truncation", truncation},
                  {"hole_perimeter_min", hole_perimeter_min}};
  j["planner"] = {{"r_min_px_cm2", r_min_px_cm2},
                  {"theta_i_max_deg", theta_i_max_deg},
                  {"theta_h_max_deg", theta_h_max_deg},
                  {"k_candidates", k_candidates},
                  {"eta_percent", eta_percent},
                  {"t_e", t_e},
                  {"t_hc", t_hc},
                  {"d_v_max", d_v_max},
                  {"samples_per_edge", samples_per_edge},
                  {"local_box", {local_box.x(), local_box.y(), local_box.z()}},
                  {"local_samples", local_samples},
                  {"local_neighbors", local_neighbors},
                  {"connection_radius", connection_radius},
                  {"sparsify_radius", sparsify_radius},
                  {"gain_discount", gain_discount},
                  {"inspect_samples", inspect_samples},
                  {"hole_connect_radius", hole_connect_radius}};
  j["mission"] = {{"sensor_period", sensor_period},
                  {"time_budget", time_budget},
                  {"wall_clock_cap", wall_clock_cap},
                  {"seed", seed},
                  {"residual_audit", residual_audit}};
  return j.dump(2);
}

}  // namespace semcover

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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "semcover/mission.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_run(const std::string& scenario_path, const std::string& mode_name,
            std::uint64_t seed, bool seed_set, double budget, bool budget_set,
            const std::string& out_dir, int threads, bool audit) {
  const auto mode = semcover::planner_mode_from_string(mode_name);
  if (!mode) {
    std::cerr << "error: unknown mode '" << mode_name
              << "' (expected swap, explore-only or surface-gain)\n";
    return 2;
  }
  semcover::Scenario scenario = semcover::load_scenario(scenario_path);
  if (budget_set) scenario.time_budget = budget;
  if (audit) scenario.residual_audit = true;
  const std::uint64_t run_seed = seed_set ? seed : scenario.seed;

  semcover::Mission mission(scenario, *mode, run_seed, threads);
  mission.run();
  mission.write_bundle(out_dir);

  const auto& log = mission.metrics_log();
  std::cout << "mode=" << semcover::to_string(*mode) << " seed=" << run_seed
            << " sim_time=" << mission.clock() << "s"
            << " cumulative_inspected="
            << (log.empty() ? 0.0 : log.back().cumulative_inspected_pct) << "%"
            << " (" << mission.done_reason() << ")\n";
  std::cout << "bundle written to " << out_dir << "\n";
  return 0;
}

int cmd_metrics(const std::string& bundle_dir) {
  const fs::path dir(bundle_dir);
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    std::cerr << "error: no manifest.json in " << bundle_dir << "\n";
    return 2;
  }
  const nlohmann::json manifest = nlohmann::json::parse(read_file(manifest_path));
  semcover::Scenario scenario =
      semcover::parse_scenario(manifest.at("scenario").dump());
  const auto mode =
      semcover::planner_mode_from_string(manifest.at("planner_mode").get<std::string>());
  if (!mode) {
    std::cerr << "error: manifest has an unknown planner_mode\n";
    return 2;
  }
  const std::uint64_t seed = manifest.at("seed").get<std::uint64_t>();
  const int threads = manifest.value("threads", 1);

  semcover::Mission mission(scenario, *mode, seed, threads);
  mission.run();
  const std::string recomputed = semcover::Mission::metrics_csv(
      mission.metrics_log(), mission.world().semantic_labels());

  const fs::path out = dir / "metrics_recomputed.csv";
  {
    std::ofstream f(out, std::ios::binary);
    f << recomputed;
  }
  const std::string stored = read_file(dir / "metrics.csv");
  if (stored == recomputed) {
    std::cout << "metrics reproduced byte-identically (" << out << ")\n";
    return 0;
  }
  std::cout << "metrics differ from the stored bundle (see " << out << ")\n";
  return 1;
}

int cmd_validate(const std::string& scenario_path) {
  try {
    const semcover::Scenario s = semcover::load_scenario(scenario_path);
    const semcover::World world = s.build_world();
    std::cout << "OK: " << s.name << " (" << world.triangles().size() << " triangles, "
              << world.semantic_labels().size() << " semantics, l_max=" << s.l_max() << "m)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "INVALID: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic semantics-aware exploration and inspection planner"};
  app.require_subcommand(1);

  // run
  std::string scenario_path, out_dir = "out", mode_name = "swap";
  std::uint64_t seed = 0;
  double budget = 0.0;
  int threads = 1;
  bool audit = false;
  CLI::App* run = app.add_subcommand("run", "Run a mission and write the artifact bundle");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--mode", mode_name, "swap | explore-only | surface-gain");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  CLI::Option* budget_opt =
      run->add_option("--budget", budget, "Override the mission time budget (s)");
  run->add_option("--out", out_dir, "Output bundle directory");
  run->add_option("--threads", threads, "Worker threads (output is thread-count invariant)");
  run->add_flag("--residual-audit", audit, "Run the residual volume/surface audit at the end");

  // metrics
  std::string bundle_dir;
  CLI::App* metrics = app.add_subcommand("metrics", "Recompute metrics.csv from a bundle");
  metrics->add_option("bundle", bundle_dir, "Bundle directory")->required();

  // validate
  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Lint a scenario file");
  validate->add_option("scenario", validate_path, "Scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(scenario_path, mode_name, seed, seed_opt->count() > 0, budget,
                     budget_opt->count() > 0, out_dir, threads, audit);
    if (metrics->parsed()) return cmd_metrics(bundle_dir);
    if (validate->parsed()) return cmd_validate(validate_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

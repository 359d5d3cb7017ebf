// Copyright 2026 The qdyn authors
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

#include <CLI11.hpp>

#include <iostream>

#include "qdyn/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Markovianity analysis of time-local quantum dynamical maps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "qdyn_out";
  std::vector<std::string> tol_overrides;
  bool fail_on_nonmarkovian = false;

  CLI::App* run = app.add_subcommand("run", "run a scenario");
  run->add_option("config", config_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--tol-override", tol_overrides,
                  "override a tolerance, KEY=VAL (repeatable)");
  run->add_flag("--fail-on-nonmarkovian", fail_on_nonmarkovian,
                "exit with code 4 when the verdict is non_markovian");

  CLI::App* validate = app.add_subcommand("validate",
                                          "parse and statically check a scenario");
  validate->add_option("config", config_path, "scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    return qdyn::validate_scenario_file(config_path);
  }

  qdyn::ScenarioConfig config;
  try {
    config = qdyn::ScenarioConfig::from_file(config_path);
    for (const auto& kv : tol_overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw qdyn::ConfigError("--tol-override expects KEY=VAL, got " + kv);
      }
      config.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
  } catch (const qdyn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qdyn::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qdyn::kExitConfigError;
  }
  return qdyn::run_scenario(config, out_dir, fail_on_nonmarkovian);
}

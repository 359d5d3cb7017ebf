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

#pragma once

#include <filesystem>
#include <map>

#include <json.hpp>

#include "qdyn/criteria.hpp"
#include "qdyn/expression.hpp"

namespace qdyn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit codes of the scenario runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericFailure = 3;
inline constexpr int kExitNonMarkovian = 4;

struct CriterionSpec {
  std::string name;
  nlohmann::json params;
};

/// Parsed scenario file (schema_version 1).  Expressions are validated at
/// parse time; tolerances may be overridden per key before running.
struct ScenarioConfig {
  int schema_version = 1;
  Eigen::Index d = 2;
  std::string generator_class;
  nlohmann::json generator_params;
  TimeGrid grid;
  std::vector<CriterionSpec> criteria;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;  // cp_tol, g_tol, tp_tol, delta

  double tol(const std::string& key, double fallback) const;

  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig from_file(const std::filesystem::path& path);

  /// Builds the time-dependent generator; empty optional for the
  /// "microscopic" class (which yields a MapFamily directly).
  std::optional<TimeDependentGenerator> build_generator() const;
  std::optional<MicroscopicModel> build_microscopic() const;
};

/// Runs the scenario: propagation, selected criteria, CSV + gnuplot + report
/// files under out_dir.  Returns an exit code.
int run_scenario(const ScenarioConfig& config,
                 const std::filesystem::path& out_dir,
                 bool fail_on_nonmarkovian = false);

/// Parse + static checks only; prints diagnostics to stderr.
int validate_scenario_file(const std::filesystem::path& path);

}  // namespace qdyn

// Copyright 2026 The swg Authors
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

// Workflows behind the command-line subcommands. Each writes its files
// into `output_dir` and returns the paths written.
//
// Exit-code contract used by the CLI: 0 success, 2 ConfigError,
// 3 NumericalError, 4 ConditioningError.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "swg/config.hpp"
#include "swg/dynamics.hpp"
#include "swg/model.hpp"

namespace swg {

struct RunConfig {
  PatternSource pattern;
  SystemConfig system;
  InitialStateKind initial = BothEdges{};
  double t_end = 150.0;
  double dt_out = 0.1;
  double threshold = 0.10;
  Tolerances tolerances;
  std::filesystem::path output_dir = "out";

  /// Keys: pattern, n_sites, xi, eta, beta, gamma, initial_state, t_end,
  /// dt_out, threshold, rtol, atol, output_dir. Unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  DirectionalityPattern resolve_pattern() const { return pattern.resolve(system.n_sites); }
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitConditioning = 4 };

/// trajectory.csv, observables.csv, meta.json
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config);

/// eigenvalues.csv, modes.csv, meta.json
std::vector<std::filesystem::path> cmd_spectrum(const RunConfig& config);

struct SweepCommand {
  std::filesystem::path spec_file;      // may be empty when resuming from a manifest
  std::filesystem::path output_dir = "sweep_out";
  std::filesystem::path resume_manifest;
  bool force = false;
  unsigned workers = 0;
  std::size_t stop_after = 0;
  bool quiet = true;
};

/// sweep.csv, manifest.json
std::vector<std::filesystem::path> cmd_sweep(const SweepCommand& cmd);

/// One "<site> <D>" line per site, or the canonical DSL text.
std::string cmd_pattern(const PatternSource& source, std::size_t n_sites, bool canonical);

/// Row-per-sample CSV bodies, exposed for tests.
std::string trajectory_csv(const Trajectory& traj);
std::string observables_csv(const Trajectory& traj, double gamma);

}  // namespace swg

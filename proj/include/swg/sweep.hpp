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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swg/config.hpp"
#include "swg/dynamics.hpp"

namespace swg {

/// Grid of (eta, xi, beta) cells over one structure.
struct SweepSpec {
  PatternSource pattern;
  std::size_t n_sites = 54;
  std::vector<double> eta;   // strictly increasing, in [0, 1]
  std::vector<double> xi;    // strictly increasing, in (0, 2 pi]
  std::vector<double> beta;  // distinct, in (0, 1]; any order
  double gamma = 1.0;
  InitialStateKind initial = BothEdges{};
  double t_end = 150.0;
  double dt_out = 0.1;
  double threshold = 0.10;
  double t_max = 1e4;
  Tolerances tolerances;

  void validate() const;
  std::size_t cell_count() const { return eta.size() * xi.size() * beta.size(); }

  /// Missing eta/xi/beta default to 41 points on [0,1], 64 points on (0, 2pi], {1}.
  static SweepSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// FNV-1a over the canonical JSON dump, as 16 hex digits.
  std::string hash() const;
};

enum class CellStatus { Pending, Ok, Failed };

struct CellResult {
  std::size_t index = 0;
  double eta = 0.0;
  double xi = 0.0;
  double beta = 1.0;
  CellStatus status = CellStatus::Pending;
  double s_st = 0.0;
  double t_hit = 0.0;
  bool capped = false;
  double p_final = 0.0;  // P_tot at the last evaluated sample
  std::string reason;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<CellResult> cells;  // ordered by index = (i_eta * n_xi + i_xi) * n_beta + i_beta
  std::string config_hash;
  std::string code_version;
  std::string created;
  std::string updated;
  std::string kernel;

  std::size_t completed() const;
  nlohmann::json to_manifest() const;
  static SweepResult from_manifest(const nlohmann::json& j);
};

struct SweepOptions {
  unsigned workers = 0;                     // 0: SWG_WORKERS or hardware concurrency
  std::optional<std::filesystem::path> output_dir;  // manifest.json + sweep.csv checkpoints
  std::size_t stop_after = 0;               // >0: stop after this many (eta, xi) groups (interruption drill)
  bool quiet = true;
};

unsigned resolve_workers(unsigned requested);

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

/// Completes the missing cells of a manifest. With `spec` given, its hash
/// must match the manifest; `allow_mismatch` discards the old cells and runs
/// `spec` from scratch instead of refusing. Throws ConfigError on mismatch.
SweepResult resume_sweep(const std::filesystem::path& manifest, const SweepOptions& options = {},
                         const std::optional<SweepSpec>& spec = std::nullopt, bool allow_mismatch = false);

/// sweep.csv: eta,xi,beta,s_st,t_hit,capped,status
std::string sweep_csv(const SweepResult& result);

}  // namespace swg

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

// JSON-facing configuration shared by the CLI commands and the sweep
// manifest. Unknown keys are rejected with a ConfigError naming the key.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swg/dynamics.hpp"
#include "swg/pattern.hpp"

namespace swg {

/// Either a builtin structure with its parameters or DSL text.
struct PatternSource {
  std::optional<Structure> builtin;
  StructureParams params;
  std::string dsl;

  /// n_sites may be 0 for DSL sources (length taken from the expansion).
  DirectionalityPattern resolve(std::size_t n_sites) const;
  std::string describe() const;
};

/// Accepts a number or a string such as "pi/2", "2pi", "0.25*pi", "1.3".
double parse_angle(const nlohmann::json& value, const std::string& field);

PatternSource pattern_from_json(const nlohmann::json& j);
nlohmann::json pattern_to_json(const PatternSource& p);

/// Mode indices in JSON are 1-based.
InitialStateKind initial_state_from_json(const nlohmann::json& j);
nlohmann::json initial_state_to_json(const InitialStateKind& kind);

/// Throws ConfigError if `j` has a key outside `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& context);

}  // namespace swg

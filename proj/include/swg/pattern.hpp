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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swg {

/// Per-site directionality D_mu in [-1, 1]. +1 couples only to the
/// right-propagating mode, -1 only to the left one, 0 is reciprocal.
class DirectionalityPattern {
 public:
  explicit DirectionalityPattern(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// True when every value is exactly one of {+1, 0, -1}.
  bool is_discrete() const noexcept;

  friend bool operator==(const DirectionalityPattern&, const DirectionalityPattern&) = default;

 private:
  std::vector<double> values_;
};

/// Node of the pattern DSL parse tree. A leaf carries one atom value, an
/// inner node concatenates its children. Either kind is repeated `count` times.
struct PatternNode {
  bool is_atom = false;
  double value = 0.0;
  std::size_t count = 1;
  std::size_t offset = 0;  // byte offset in the source
  std::vector<PatternNode> children;

  std::size_t expanded_length() const;
};

/// Root of a parsed pattern; the root itself is a group with count 1.
struct PatternExpr {
  PatternNode root;
};

/// Hard limit on the number of sites a DSL expression may expand to.
inline constexpr std::size_t kMaxPatternLength = 1u << 22;

// Grammar:
//   pattern := item+
//   item    := atom | atom '*' INT | '(' item+ ')' '*' INT
//   atom    := 'R' | 'O' | 'L'
// Whitespace between tokens is ignored. Throws ParseError.
PatternExpr parse_pattern(std::string_view source);

DirectionalityPattern expand(const PatternExpr& expr);

/// Run-length compressed canonical DSL text. Requires a discrete pattern.
std::string serialize(const DirectionalityPattern& pattern);

enum class Structure { S1, S2, S3, S4 };

struct StructureParams {
  std::optional<std::size_t> center_width;  // S1, default 10
  std::optional<std::size_t> o_left;        // S2, 1-based, default 11
};

Structure parse_structure(std::string_view name);
std::string_view structure_name(Structure s);

DirectionalityPattern builtin_structure(Structure s, std::size_t n_sites,
                                        const StructureParams& params = {});

}  // namespace swg

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

#include "swg/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "swg/error.hpp"

namespace swg {

DirectionalityPattern::DirectionalityPattern(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("directionality pattern must have at least one site");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double d = values_[i];
    if (!std::isfinite(d) || d < -1.0 || d > 1.0) {
      throw ConfigError("directionality at site " + std::to_string(i + 1) + " outside [-1, 1]");
    }
  }
}

bool DirectionalityPattern::is_discrete() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double d) { return d == 1.0 || d == 0.0 || d == -1.0; });
}

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return b > std::numeric_limits<std::size_t>::max() - a ? std::numeric_limits<std::size_t>::max()
                                                          : a + b;
}

bool atom_value(char c, double& value) {
  switch (c) {
    case 'R': value = 1.0; return true;
    case 'O': value = 0.0; return true;
    case 'L': value = -1.0; return true;
    default: return false;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  PatternExpr run() {
    PatternExpr expr;
    expr.root.offset = 0;
    parse_items(expr.root.children);
    skip_ws();
    if (pos_ < src_.size()) {
      // parse_items only stops early on ')'
      throw ParseError("unbalanced parenthesis: unmatched ')'", pos_);
    }
    if (expr.root.children.empty()) throw ParseError("empty pattern", pos_);
    if (expr.root.expanded_length() > kMaxPatternLength) {
      throw ParseError("pattern expands to more than " + std::to_string(kMaxPatternLength) + " sites", 0);
    }
    return expr;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  void parse_items(std::vector<PatternNode>& out) {
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] == ')') return;
      out.push_back(parse_item());
    }
  }

  PatternNode parse_item() {
    PatternNode node;
    node.offset = pos_;
    const char c = src_[pos_];
    if (atom_value(c, node.value)) {
      node.is_atom = true;
      ++pos_;
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '*') {
        ++pos_;
        node.count = parse_count();
      }
      return node;
    }
    if (c == '(') {
      ++pos_;
      parse_items(node.children);
      if (pos_ >= src_.size()) throw ParseError("unbalanced parenthesis: '(' never closed", node.offset);
      if (node.children.empty()) throw ParseError("empty group", node.offset);
      ++pos_;  // ')'
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != '*') {
        throw ParseError("expected '*' and a repetition count after group", pos_);
      }
      ++pos_;
      node.count = parse_count();
      return node;
    }
    throw ParseError(std::string("unknown token '") + c + "'", pos_);
  }

  std::size_t parse_count() {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      value = saturating_add(saturating_mul(value, 10), static_cast<std::size_t>(src_[pos_] - '0'));
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected repetition count", start);
    if (value == 0) throw ParseError("zero repetition count", start);
    if (value > kMaxPatternLength) throw ParseError("repetition count too large", start);
    return value;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void expand_into(const PatternNode& node, std::vector<double>& out) {
  for (std::size_t rep = 0; rep < node.count; ++rep) {
    if (node.is_atom) {
      out.push_back(node.value);
    } else {
      for (const auto& child : node.children) expand_into(child, out);
    }
  }
}

char atom_letter(double d) { return d > 0.0 ? 'R' : (d < 0.0 ? 'L' : 'O'); }

// Greedy left-to-right: at each position take the (period, repeats) pair that
// covers the most sites, preferring the shorter period on ties.
std::string compress(std::span<const double> seq) {
  std::string out;
  std::size_t pos = 0;
  const std::size_t n = seq.size();
  while (pos < n) {
    std::size_t best_period = 1;
    std::size_t best_repeats = 1;
    for (std::size_t p = 1; 2 * p <= n - pos; ++p) {
      std::size_t k = 1;
      while (pos + (k + 1) * p <= n &&
             std::equal(seq.begin() + pos, seq.begin() + pos + p, seq.begin() + pos + k * p)) {
        ++k;
      }
      if (k >= 2 && p * k > best_period * best_repeats) {
        best_period = p;
        best_repeats = k;
      }
    }
    if (!out.empty()) out += ' ';
    if (best_repeats < 2) {
      out += atom_letter(seq[pos]);
    } else if (best_period == 1) {
      out += atom_letter(seq[pos]);
      out += '*' + std::to_string(best_repeats);
    } else {
      out += '(' + compress(seq.subspan(pos, best_period)) + ")*" + std::to_string(best_repeats);
    }
    pos += best_period * best_repeats;
  }
  return out;
}

}  // namespace

std::size_t PatternNode::expanded_length() const {
  std::size_t unit = 1;
  if (!is_atom) {
    unit = 0;
    for (const auto& child : children) unit = saturating_add(unit, child.expanded_length());
  }
  return saturating_mul(unit, count);
}

PatternExpr parse_pattern(std::string_view source) { return Parser(source).run(); }

DirectionalityPattern expand(const PatternExpr& expr) {
  std::vector<double> values;
  values.reserve(expr.root.expanded_length());
  expand_into(expr.root, values);
  return DirectionalityPattern(std::move(values));
}

std::string serialize(const DirectionalityPattern& pattern) {
  if (!pattern.is_discrete()) {
    throw ConfigError("only patterns over {+1, 0, -1} have a DSL form");
  }
  return compress(pattern.values());
}

Structure parse_structure(std::string_view name) {
  if (name == "S1") return Structure::S1;
  if (name == "S2") return Structure::S2;
  if (name == "S3") return Structure::S3;
  if (name == "S4") return Structure::S4;
  throw ConfigError("unknown structure '" + std::string(name) + "' (expected S1, S2, S3 or S4)");
}

std::string_view structure_name(Structure s) {
  switch (s) {
    case Structure::S1: return "S1";
    case Structure::S2: return "S2";
    case Structure::S3: return "S3";
    case Structure::S4: return "S4";
  }
  return "?";
}

DirectionalityPattern builtin_structure(Structure s, std::size_t n_sites,
                                        const StructureParams& params) {
  if (n_sites == 0) throw ConfigError("n_sites must be positive");
  std::vector<double> d(n_sites);
  switch (s) {
    case Structure::S1: {
      const std::size_t width = params.center_width.value_or(10);
      if (width > n_sites) {
        throw ConfigError("S1 center width " + std::to_string(width) + " exceeds N=" + std::to_string(n_sites));
      }
      if ((n_sites - width) % 2 != 0) {
        throw ConfigError("S1 requires center width with the same parity as N (N=" +
                          std::to_string(n_sites) + ", width=" + std::to_string(width) + ")");
      }
      const std::size_t side = (n_sites - width) / 2;
      for (std::size_t i = 0; i < n_sites; ++i) {
        d[i] = i < side ? 1.0 : (i < side + width ? 0.0 : -1.0);
      }
      break;
    }
    case Structure::S2: {
      if (n_sites % 2 != 0) throw ConfigError("S2 requires even N (got " + std::to_string(n_sites) + ")");
      const std::size_t half = n_sites / 2;
      const std::size_t o_left = params.o_left.value_or(11);
      if (o_left < 1 || o_left > half) {
        throw ConfigError("S2 reciprocal site o_left=" + std::to_string(o_left) + " must lie in 1.." +
                          std::to_string(half));
      }
      for (std::size_t i = 0; i < n_sites; ++i) d[i] = i < half ? 1.0 : -1.0;
      d[o_left - 1] = 0.0;
      d[n_sites - o_left] = 0.0;
      break;
    }
    case Structure::S3:
      if (n_sites % 2 != 0) throw ConfigError("S3 requires even N (got " + std::to_string(n_sites) + ")");
      for (std::size_t i = 0; i < n_sites; ++i) d[i] = i % 2 == 0 ? 1.0 : -1.0;
      break;
    case Structure::S4:
      if (n_sites % 3 != 0) {
        throw ConfigError("S4 requires N divisible by 3 (got " + std::to_string(n_sites) + ")");
      }
      for (std::size_t i = 0; i < n_sites; ++i) d[i] = 1.0 - static_cast<double>(i % 3);
      break;
  }
  return DirectionalityPattern(std::move(d));
}

}  // namespace swg

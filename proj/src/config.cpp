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

#include "swg/config.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "swg/error.hpp"

namespace swg {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + context);
  }
}

namespace {

std::size_t get_count(const json& j, const char* key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(context + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + " must be a number");
  return j.get<double>();
}

}  // namespace

double parse_angle(const json& value, const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ConfigError(field + " must be a number or an expression like \"pi/2\"");
  std::string s;
  for (char c : value.get<std::string>()) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  const auto bad = [&]() { return ConfigError(field + ": cannot parse angle '" + value.get<std::string>() + "'"); };
  const auto to_double = [&](const std::string& text) {
    if (text.empty()) throw bad();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != text.size()) throw bad();
    return v;
  };
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) return to_double(s);
  std::string head = s.substr(0, pi_pos);
  std::string tail = s.substr(pi_pos + 2);
  double factor = 1.0;
  if (!head.empty()) {
    if (head.back() == '*') head.pop_back();
    factor = head == "-" ? -1.0 : to_double(head);
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw bad();
    divisor = to_double(tail.substr(1));
    if (divisor == 0.0) throw bad();
  }
  return factor * std::numbers::pi / divisor;
}

DirectionalityPattern PatternSource::resolve(std::size_t n_sites) const {
  if (builtin) {
    if (n_sites == 0) throw ConfigError("n_sites is required for builtin structures");
    return builtin_structure(*builtin, n_sites, params);
  }
  auto pattern = expand(parse_pattern(dsl));
  if (n_sites != 0 && pattern.size() != n_sites) {
    throw ConfigError("pattern expands to " + std::to_string(pattern.size()) + " sites but n_sites is " +
                      std::to_string(n_sites));
  }
  return pattern;
}

std::string PatternSource::describe() const {
  if (!builtin) return "dsl:" + dsl;
  std::string s(structure_name(*builtin));
  if (params.center_width) s += " width=" + std::to_string(*params.center_width);
  if (params.o_left) s += " o_left=" + std::to_string(*params.o_left);
  return s;
}

PatternSource pattern_from_json(const json& j) {
  reject_unknown_keys(j, {"builtin", "dsl", "center_width", "o_left"}, "pattern");
  PatternSource p;
  if (j.contains("builtin") == j.contains("dsl")) {
    throw ConfigError("pattern needs exactly one of 'builtin' or 'dsl'");
  }
  if (j.contains("builtin")) {
    if (!j["builtin"].is_string()) throw ConfigError("pattern.builtin must be a string");
    p.builtin = parse_structure(j["builtin"].get<std::string>());
    if (j.contains("center_width")) p.params.center_width = get_count(j, "center_width", "pattern");
    if (j.contains("o_left")) p.params.o_left = get_count(j, "o_left", "pattern");
  } else {
    if (!j["dsl"].is_string()) throw ConfigError("pattern.dsl must be a string");
    if (j.contains("center_width") || j.contains("o_left")) {
      throw ConfigError("center_width/o_left only apply to builtin structures");
    }
    p.dsl = j["dsl"].get<std::string>();
  }
  return p;
}

json pattern_to_json(const PatternSource& p) {
  json j = json::object();
  if (p.builtin) {
    j["builtin"] = std::string(structure_name(*p.builtin));
    if (p.params.center_width) j["center_width"] = *p.params.center_width;
    if (p.params.o_left) j["o_left"] = *p.params.o_left;
  } else {
    j["dsl"] = p.dsl;
  }
  return j;
}

InitialStateKind initial_state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("initial_state needs a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "single_site") {
    reject_unknown_keys(j, {"kind", "site"}, "initial_state");
    return SingleSite{j.contains("site") ? get_count(j, "site", "initial_state") : 1};
  }
  if (kind == "both_edges") {
    reject_unknown_keys(j, {"kind", "phase"}, "initial_state");
    return BothEdges{j.contains("phase") ? parse_angle(j["phase"], "initial_state.phase") : 0.0};
  }
  if (kind == "custom") {
    reject_unknown_keys(j, {"kind", "re", "im"}, "initial_state");
    if (!j.contains("re") || !j["re"].is_array()) throw ConfigError("initial_state.re must be an array");
    const auto& re = j["re"];
    const json im = j.contains("im") ? j["im"] : json::array();
    if (!im.is_array() || (!im.empty() && im.size() != re.size())) {
      throw ConfigError("initial_state.im must match initial_state.re");
    }
    CustomAmplitudes c;
    for (std::size_t i = 0; i < re.size(); ++i) {
      c.amplitudes.emplace_back(get_number(re[i], "initial_state.re"),
                                im.empty() ? 0.0 : get_number(im[i], "initial_state.im"));
    }
    return c;
  }
  if (kind == "mode_quench") {
    reject_unknown_keys(j, {"kind", "modes", "weights_re", "weights_im"}, "initial_state");
    if (!j.contains("modes") || !j["modes"].is_array()) throw ConfigError("initial_state.modes must be an array");
    ModeQuench q;
    for (const auto& m : j["modes"]) {
      if (!m.is_number_integer() || m.get<long long>() < 1) {
        throw ConfigError("initial_state.modes entries are 1-based positive integers");
      }
      q.selection.indices.push_back(m.get<std::size_t>() - 1);
    }
    if (j.contains("weights_re")) {
      const auto& wr = j["weights_re"];
      const json wi = j.contains("weights_im") ? j["weights_im"] : json::array();
      if (!wr.is_array() || wr.size() != q.selection.indices.size() || (!wi.empty() && wi.size() != wr.size())) {
        throw ConfigError("initial_state weights must match modes");
      }
      for (std::size_t i = 0; i < wr.size(); ++i) {
        q.selection.weights.emplace_back(get_number(wr[i], "initial_state.weights_re"),
                                         wi.empty() ? 0.0 : get_number(wi[i], "initial_state.weights_im"));
      }
    }
    return q;
  }
  throw ConfigError("unknown initial_state kind '" + kind + "'");
}

json initial_state_to_json(const InitialStateKind& kind) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SingleSite>) {
          return {{"kind", "single_site"}, {"site", k.site}};
        } else if constexpr (std::is_same_v<K, BothEdges>) {
          return {{"kind", "both_edges"}, {"phase", k.phase}};
        } else if constexpr (std::is_same_v<K, CustomAmplitudes>) {
          json re = json::array(), im = json::array();
          for (const auto& a : k.amplitudes) {
            re.push_back(a.real());
            im.push_back(a.imag());
          }
          return {{"kind", "custom"}, {"re", re}, {"im", im}};
        } else {
          json modes = json::array();
          for (auto idx : k.selection.indices) modes.push_back(idx + 1);
          json j = {{"kind", "mode_quench"}, {"modes", modes}};
          if (!k.selection.weights.empty()) {
            json re = json::array(), im = json::array();
            for (const auto& w : k.selection.weights) {
              re.push_back(w.real());
              im.push_back(w.imag());
            }
            j["weights_re"] = re;
            j["weights_im"] = im;
          }
          return j;
        }
      },
      kind);
}

}  // namespace swg

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

#include "swg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "swg/error.hpp"
#include "swg/io.hpp"
#include "swg/kernels.hpp"
#include "swg/model.hpp"
#include "swg/observables.hpp"

#ifndef SWG_VERSION
#define SWG_VERSION "dev"
#endif

namespace swg {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

// Array of numbers/angle strings, or {"linspace": [lo, hi, count]}.
std::vector<double> grid_from_json(const json& j, const std::string& field) {
  if (j.is_object()) {
    reject_unknown_keys(j, {"linspace"}, field);
    const auto& ls = j.at("linspace");
    if (!ls.is_array() || ls.size() != 3 || !ls[2].is_number_integer() || ls[2].get<long long>() < 1) {
      throw ConfigError(field + ".linspace must be [lo, hi, count]");
    }
    return linspace(parse_angle(ls[0], field), parse_angle(ls[1], field), ls[2].get<std::size_t>());
  }
  if (!j.is_array()) throw ConfigError(field + " must be an array or {\"linspace\": [lo, hi, count]}");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(parse_angle(x, field));
  return v;
}

void require_increasing(const std::vector<double>& v, const std::string& field) {
  if (v.empty()) throw ConfigError(field + " grid must be non-empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw ConfigError(field + " grid must be strictly increasing");
  }
}

const char* status_name(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Failed: return "failed";
    case CellStatus::Pending: return "pending";
  }
  return "pending";
}

CellStatus status_from(const std::string& s) {
  if (s == "ok") return CellStatus::Ok;
  if (s == "failed") return CellStatus::Failed;
  if (s == "pending") return CellStatus::Pending;
  throw ConfigError("unknown cell status '" + s + "'");
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

std::vector<CellResult> blank_cells(const SweepSpec& spec) {
  std::vector<CellResult> cells;
  cells.reserve(spec.cell_count());
  for (double eta : spec.eta) {
    for (double xi : spec.xi) {
      for (double beta : spec.beta) {
        CellResult c;
        c.index = cells.size();
        c.eta = eta;
        c.xi = xi;
        c.beta = beta;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

// One (eta, xi) group: a single beta = 1 evolution serves every beta in the
// list, since a uniform diagonal shift scales P_tot by exp(-gamma_ng t) and
// leaves the normalized distribution untouched.
void run_group(const SweepSpec& spec, const DirectionalityPattern& pattern, CellResult* cells) {
  const std::size_t n_beta = spec.beta.size();
  SystemConfig config;
  config.n_sites = spec.n_sites;
  config.spacing = cells[0].xi;
  config.chirality = cells[0].eta;
  config.beta = 1.0;
  config.gamma = spec.gamma;
  const auto m = build_propagator(pattern, config);
  const auto a0 = initial_state(spec.initial, spec.n_sites);
  AmplitudePropagator prop(m, a0, spec.tolerances);

  std::vector<double> loss(n_beta);
  std::vector<SteadySpreadTracker> trackers;
  for (std::size_t b = 0; b < n_beta; ++b) {
    loss[b] = spec.gamma * (1.0 - spec.beta[b]) / spec.beta[b];
    trackers.emplace_back(spec.threshold);
  }

  std::vector<double> scaled(spec.n_sites);
  std::vector<double> last_total(n_beta, 0.0);
  double horizon = spec.t_end;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * spec.dt_out;
    if (t > horizon * (1.0 + 1e-12)) {
      if (horizon >= spec.t_max) break;
      horizon = std::min(2.0 * horizon, spec.t_max);
      if (t > horizon * (1.0 + 1e-12)) break;
    }
    prop.advance_to(t);
    const auto amps = prop.amplitudes();
    const auto n = site_populations(amps);
    bool all_done = true;
    for (std::size_t b = 0; b < n_beta; ++b) {
      if (trackers[b].done()) continue;
      const double factor = loss[b] == 0.0 ? 1.0 : std::exp(-loss[b] * t);
      double total = 0.0;
      for (std::size_t j = 0; j < n.size(); ++j) {
        scaled[j] = n[j] * factor;
        total += scaled[j];
      }
      last_total[b] = total;
      all_done = trackers[b].observe(t, scaled) && all_done;
    }
    if (all_done) break;
  }

  for (std::size_t b = 0; b < n_beta; ++b) {
    const auto r = trackers[b].result();
    auto& c = cells[b];
    c.status = CellStatus::Ok;
    c.s_st = r.s_st;
    c.t_hit = r.t_hit;
    c.capped = r.flag == SteadyFlag::Capped;
    c.p_final = last_total[b];
    c.reason.clear();
  }
}

SweepResult execute(SweepResult result, const SweepOptions& options) {
  const SweepSpec& spec = result.spec;
  const auto pattern = spec.pattern.resolve(spec.n_sites);
  const std::size_t n_beta = spec.beta.size();
  const std::size_t n_groups = spec.eta.size() * spec.xi.size();

  std::vector<std::size_t> todo;
  for (std::size_t g = 0; g < n_groups; ++g) {
    const auto* first = &result.cells[g * n_beta];
    const bool complete = std::all_of(first, first + n_beta, [](const CellResult& c) {
      return c.status != CellStatus::Pending;
    });
    if (!complete) todo.push_back(g);
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{0};
  std::atomic<bool> stop{false};
  auto last_flush = std::chrono::steady_clock::now();

  const auto flush = [&]() {
    if (!options.output_dir) return;
    result.updated = io::utc_timestamp();
    io::write_file_atomic(*options.output_dir / "manifest.json", result.to_manifest().dump(1) + "\n");
    io::write_file_atomic(*options.output_dir / "sweep.csv", sweep_csv(result));
  };

  const auto worker = [&]() {
    std::vector<CellResult> local(n_beta);
    for (;;) {
      if (stop.load()) return;
      const std::size_t slot = next.fetch_add(1);
      if (slot >= todo.size()) return;
      const std::size_t g = todo[slot];
      for (std::size_t b = 0; b < n_beta; ++b) local[b] = result.cells[g * n_beta + b];
      try {
        run_group(spec, pattern, local.data());
      } catch (const std::exception& e) {
        for (auto& c : local) {
          c.status = CellStatus::Failed;
          c.reason = e.what();
          c.s_st = kNaN;
          c.t_hit = kNaN;
          c.capped = false;
          c.p_final = kNaN;
        }
      }
      std::lock_guard lock(mu);
      for (std::size_t b = 0; b < n_beta; ++b) result.cells[g * n_beta + b] = local[b];
      const std::size_t done = ++finished;
      if (options.stop_after > 0 && done >= options.stop_after) stop = true;
      if (!options.quiet) std::fprintf(stderr, "\rsweep: %zu/%zu groups", done, todo.size());
      const auto now = std::chrono::steady_clock::now();
      if (now - last_flush > std::chrono::seconds(2)) {
        flush();
        last_flush = now;
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(resolve_workers(options.workers),
                                                           static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (!options.quiet && !todo.empty()) std::fprintf(stderr, "\n");
  flush();
  return result;
}

}  // namespace

void SweepSpec::validate() const {
  if (n_sites < 1) throw ConfigError("n_sites must be >= 1");
  pattern.resolve(n_sites);
  require_increasing(eta, "eta");
  require_increasing(xi, "xi");
  for (double e : eta) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("eta values must lie in [0, 1]");
  }
  for (double x : xi) {
    if (!(x > 0.0 && x <= 2.0 * std::numbers::pi * (1.0 + 1e-12))) throw ConfigError("xi values must lie in (0, 2pi]");
  }
  if (beta.empty()) throw ConfigError("beta list must be non-empty");
  std::set<double> distinct(beta.begin(), beta.end());
  if (distinct.size() != beta.size()) throw ConfigError("beta values must be distinct");
  for (double b : beta) {
    if (!(b > 0.0 && b <= 1.0)) throw ConfigError("beta values must lie in (0, 1]");
  }
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (std::holds_alternative<ModeQuench>(initial)) {
    throw ConfigError("sweeps support single_site, both_edges and custom initial states");
  }
  initial_state(initial, n_sites);
  uniform_grid(t_end, dt_out);
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
  if (!(t_max >= t_end)) throw ConfigError("t_max must be >= t_end");
  if (!(tolerances.rtol > 0.0) || !(tolerances.atol > 0.0)) throw ConfigError("tolerances must be positive");
}

SweepSpec SweepSpec::from_json(const json& j) {
  reject_unknown_keys(j, {"pattern", "n_sites", "eta", "xi", "beta", "gamma", "initial_state", "t_end", "dt_out",
                          "threshold", "t_max", "rtol", "atol"},
                      "sweep spec");
  SweepSpec s;
  if (!j.contains("pattern")) throw ConfigError("sweep spec needs 'pattern'");
  s.pattern = pattern_from_json(j["pattern"]);
  if (j.contains("n_sites")) {
    if (!j["n_sites"].is_number_integer() || j["n_sites"].get<long long>() < 1) {
      throw ConfigError("n_sites must be a positive integer");
    }
    s.n_sites = j["n_sites"].get<std::size_t>();
  } else if (!s.pattern.builtin) {
    s.n_sites = s.pattern.resolve(0).size();
  }
  s.eta = j.contains("eta") ? grid_from_json(j["eta"], "eta") : linspace(0.0, 1.0, 41);
  if (j.contains("xi")) {
    s.xi = grid_from_json(j["xi"], "xi");
  } else {
    for (int k = 1; k <= 64; ++k) s.xi.push_back(2.0 * std::numbers::pi * k / 64.0);
  }
  s.beta = j.contains("beta") ? grid_from_json(j["beta"], "beta") : std::vector<double>{1.0};
  const auto num = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
    out = j[key].get<double>();
  };
  num("gamma", s.gamma);
  num("t_end", s.t_end);
  num("dt_out", s.dt_out);
  num("threshold", s.threshold);
  num("t_max", s.t_max);
  num("rtol", s.tolerances.rtol);
  num("atol", s.tolerances.atol);
  if (j.contains("initial_state")) s.initial = initial_state_from_json(j["initial_state"]);
  s.validate();
  return s;
}

json SweepSpec::to_json() const {
  return {{"pattern", pattern_to_json(pattern)},
          {"n_sites", n_sites},
          {"eta", eta},
          {"xi", xi},
          {"beta", beta},
          {"gamma", gamma},
          {"initial_state", initial_state_to_json(initial)},
          {"t_end", t_end},
          {"dt_out", dt_out},
          {"threshold", threshold},
          {"t_max", t_max},
          {"rtol", tolerances.rtol},
          {"atol", tolerances.atol}};
}

std::string SweepSpec::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(io::fnv1a64(to_json().dump())));
  return buf;
}

std::size_t SweepResult::completed() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return c.status != CellStatus::Pending; }));
}

json SweepResult::to_manifest() const {
  json cell_list = json::array();
  for (const auto& c : cells) {
    json jc = {{"index", c.index}, {"eta", c.eta}, {"xi", c.xi}, {"beta", c.beta}, {"status", status_name(c.status)}};
    if (c.status != CellStatus::Pending) {
      jc["s_st"] = number_or_null(c.s_st);
      jc["t_hit"] = number_or_null(c.t_hit);
      jc["capped"] = c.capped;
      jc["p_final"] = number_or_null(c.p_final);
      if (!c.reason.empty()) jc["reason"] = c.reason;
    }
    cell_list.push_back(std::move(jc));
  }
  return {{"format", "swg-sweep-manifest/1"},
          {"spec", spec.to_json()},
          {"config_hash", config_hash},
          {"code_version", code_version},
          {"kernel", kernel},
          {"created", created},
          {"updated", updated},
          {"completed", completed()},
          {"cells", cell_list}};
}

SweepResult SweepResult::from_manifest(const json& j) {
  try {
    if (j.value("format", "") != "swg-sweep-manifest/1") throw ConfigError("not a sweep manifest");
    SweepResult r;
    r.spec = SweepSpec::from_json(j.at("spec"));
    r.config_hash = j.at("config_hash").get<std::string>();
    r.code_version = j.value("code_version", "");
    r.kernel = j.value("kernel", "");
    r.created = j.value("created", "");
    r.updated = j.value("updated", "");
    r.cells = blank_cells(r.spec);
    const auto& list = j.at("cells");
    if (!list.is_array()) throw ConfigError("manifest cells must be an array");
    for (const auto& jc : list) {
      const auto idx = jc.at("index").get<std::size_t>();
      if (idx >= r.cells.size()) throw ConfigError("manifest cell index out of range");
      auto& c = r.cells[idx];
      c.status = status_from(jc.at("status").get<std::string>());
      if (c.status == CellStatus::Pending) continue;
      c.s_st = number_from(jc.at("s_st"));
      c.t_hit = number_from(jc.at("t_hit"));
      c.capped = jc.at("capped").get<bool>();
      c.p_final = number_from(jc.at("p_final"));
      c.reason = jc.value("reason", "");
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SWG_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  SweepResult result;
  result.spec = spec;
  result.cells = blank_cells(spec);
  result.config_hash = spec.hash();
  result.code_version = SWG_VERSION;
  result.kernel = std::string(kernels::active().name);
  result.created = io::utc_timestamp();
  return execute(std::move(result), options);
}

SweepResult resume_sweep(const std::filesystem::path& manifest, const SweepOptions& options,
                         const std::optional<SweepSpec>& spec, bool allow_mismatch) {
  json j;
  try {
    j = json::parse(io::read_file(manifest));
  } catch (const json::parse_error& e) {
    throw ConfigError("manifest is not valid JSON: " + std::string(e.what()));
  }
  auto previous = SweepResult::from_manifest(j);
  const std::string expected = spec ? spec->hash() : previous.spec.hash();
  if (previous.config_hash != expected || previous.spec.hash() != expected) {
    if (!allow_mismatch) {
      throw ConfigError("config hash mismatch: manifest " + previous.config_hash + ", spec " + expected +
                        " (pass the override flag to discard the old cells)");
    }
    return run_sweep(spec ? *spec : previous.spec, options);
  }
  previous.code_version = SWG_VERSION;
  previous.kernel = std::string(kernels::active().name);
  return execute(std::move(previous), options);
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "eta,xi,beta,s_st,t_hit,capped,status\n";
  for (const auto& c : result.cells) {
    out += io::format_number(c.eta) + ',' + io::format_number(c.xi) + ',' + io::format_number(c.beta) + ',';
    if (c.status == CellStatus::Pending) {
      out += ",,,pending\n";
      continue;
    }
    out += io::format_number(c.s_st) + ',' + io::format_number(c.t_hit) + ',' + (c.capped ? "1" : "0") + ',' +
           status_name(c.status) + '\n';
  }
  return out;
}

}  // namespace swg

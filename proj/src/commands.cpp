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

#include "swg/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include <Eigen/Eigenvalues>

#include "swg/error.hpp"
#include "swg/io.hpp"
#include "swg/kernels.hpp"
#include "swg/observables.hpp"
#include "swg/spectral.hpp"
#include "swg/sweep.hpp"

#ifndef SWG_VERSION
#define SWG_VERSION "dev"
#endif

namespace swg {

using nlohmann::json;

namespace {

constexpr double kPassivityTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kNormTol = 1e-9;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_checks(const PropagatorMatrix& m, const SystemConfig& cfg) {
  const Eigen::MatrixXcd gamma_matrix = -(m.dense() + m.dense().adjoint());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> herm(gamma_matrix, Eigen::EigenvaluesOnly);
  const double min_eig = herm.eigenvalues().minCoeff();
  const double expected = -static_cast<double>(cfg.n_sites) * cfg.total_rate() / 2.0;
  const cplx trace = m.dense().trace();
  const double trace_err = std::abs(trace - cplx(expected, 0.0)) / std::abs(expected);
  return {{"passivity", {{"min_eigenvalue", min_eig}, {"passed", min_eig >= -kPassivityTol * cfg.gamma}}},
          {"trace_identity", {{"relative_error", trace_err}, {"passed", trace_err <= kTraceTol}}}};
}

json norm_check(const std::vector<double>& totals) {
  double worst = 0.0;
  for (std::size_t k = 1; k < totals.size(); ++k) worst = std::max(worst, totals[k] - totals[k - 1]);
  return {{"max_increase", worst}, {"passed", worst <= kNormTol}};
}

json pattern_json(const DirectionalityPattern& p) {
  json j = {{"values", std::vector<double>(p.values().begin(), p.values().end())}};
  if (p.is_discrete()) j["dsl"] = serialize(p);
  return j;
}

double get_number(const json& j, const char* key) {
  if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
  return j[key].get<double>();
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown_keys(j, {"pattern", "n_sites", "xi", "eta", "beta", "gamma", "initial_state", "t_end", "dt_out",
                          "threshold", "rtol", "atol", "output_dir"},
                      "config");
  RunConfig c;
  if (!j.contains("pattern")) throw ConfigError("config needs 'pattern'");
  c.pattern = pattern_from_json(j["pattern"]);
  if (j.contains("n_sites")) {
    if (!j["n_sites"].is_number_integer() || j["n_sites"].get<long long>() < 1) {
      throw ConfigError("n_sites must be a positive integer");
    }
    c.system.n_sites = j["n_sites"].get<std::size_t>();
  } else {
    if (c.pattern.builtin) throw ConfigError("n_sites is required for builtin structures");
    c.system.n_sites = 0;
  }
  c.system.n_sites = c.pattern.resolve(c.system.n_sites).size();
  if (j.contains("xi")) c.system.spacing = parse_angle(j["xi"], "xi");
  if (j.contains("eta")) c.system.chirality = get_number(j, "eta");
  if (j.contains("beta")) c.system.beta = get_number(j, "beta");
  if (j.contains("gamma")) c.system.gamma = get_number(j, "gamma");
  if (j.contains("initial_state")) c.initial = initial_state_from_json(j["initial_state"]);
  if (j.contains("t_end")) c.t_end = get_number(j, "t_end");
  if (j.contains("dt_out")) c.dt_out = get_number(j, "dt_out");
  if (j.contains("threshold")) c.threshold = get_number(j, "threshold");
  if (j.contains("rtol")) c.tolerances.rtol = get_number(j, "rtol");
  if (j.contains("atol")) c.tolerances.atol = get_number(j, "atol");
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("output_dir must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  c.system.validate();
  uniform_grid(c.t_end, c.dt_out);
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
  if (!(c.tolerances.rtol > 0.0) || !(c.tolerances.atol > 0.0)) throw ConfigError("rtol/atol must be positive");
  return c;
}

json RunConfig::to_json() const {
  return {{"pattern", pattern_to_json(pattern)},
          {"n_sites", system.n_sites},
          {"xi", system.spacing},
          {"eta", system.chirality},
          {"beta", system.beta},
          {"gamma", system.gamma},
          {"initial_state", initial_state_to_json(initial)},
          {"t_end", t_end},
          {"dt_out", dt_out},
          {"threshold", threshold},
          {"rtol", tolerances.rtol},
          {"atol", tolerances.atol},
          {"output_dir", output_dir.string()}};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  for (std::size_t j = 1; j <= traj.n_sites(); ++j) out += ",n_" + std::to_string(j);
  out += '\n';
  for (std::size_t k = 0; k < traj.n_samples(); ++k) {
    out += io::format_number(traj.times[k]);
    for (double n : site_populations(traj.states[k])) out += ',' + io::format_number(n);
    out += '\n';
  }
  return out;
}

std::string observables_csv(const Trajectory& traj, double gamma) {
  const auto pops = populations(traj);
  const auto ratio = subradiance_ratio(traj, gamma);
  std::string out = "t,P_tot,x_cm,s,subradiance_ratio\n";
  for (std::size_t k = 0; k < traj.n_samples(); ++k) {
    SpreadSample sp{std::nan(""), std::nan(""), false};
    if (traj.n_sites() >= 2) sp = spread_of(pops.sites[k]);
    out += io::format_number(traj.times[k]) + ',' + io::format_number(pops.total[k]) + ',' +
           io::format_number(sp.x_cm) + ',' + io::format_number(sp.s) + ',' + io::format_number(ratio[k]) + '\n';
  }
  return out;
}

std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config) {
  const auto pattern = config.resolve_pattern();
  const auto m = build_propagator(pattern, config.system);

  std::optional<SpectralDecomposition> decomp;
  if (std::holds_alternative<ModeQuench>(config.initial)) decomp = decompose(m);
  const auto a0 = initial_state(config.initial, config.system.n_sites, decomp ? &*decomp : nullptr);

  const auto traj = evolve_ode(m, a0, config.t_end, config.dt_out, config.tolerances);
  const auto pops = populations(traj);

  json checks = matrix_checks(m, config.system);
  checks["norm_monotonicity"] = norm_check(pops.total);

  json meta = {{"command", "simulate"},
               {"code_version", SWG_VERSION},
               {"kernel", std::string(kernels::active().name)},
               {"config", config.to_json()},
               {"pattern", pattern_json(pattern)},
               {"nonguided_rate", config.system.nonguided_rate()},
               {"samples", traj.n_samples()},
               {"checks", checks}};
  if (config.system.n_sites >= 2) {
    const auto st = steady_spread(traj, config.threshold);
    meta["steady_spread"] = {{"s_st", number_or_null(st.s_st)},
                             {"t_hit", st.t_hit},
                             {"flag", st.flag == SteadyFlag::Hit ? "hit" : "capped"}};
  }

  const auto& dir = config.output_dir;
  std::vector<std::filesystem::path> written{dir / "trajectory.csv", dir / "observables.csv", dir / "meta.json"};
  io::write_file_atomic(written[0], trajectory_csv(traj));
  io::write_file_atomic(written[1], observables_csv(traj, config.system.gamma));
  io::write_file_atomic(written[2], meta.dump(2) + "\n");
  return written;
}

std::vector<std::filesystem::path> cmd_spectrum(const RunConfig& config) {
  const auto pattern = config.resolve_pattern();
  const auto m = build_propagator(pattern, config.system);
  if (config.system.chirality >= 1.0) {
    std::cerr << "warning: eta = 1 sits on exceptional points; the decomposition may fail the conditioning gate\n";
  }
  const auto decomp = decompose(m);
  ModeThresholds thresholds;
  thresholds.gamma = config.system.gamma;
  const auto labels = classify_modes(decomp, thresholds);

  std::string eig = "index,omega,gamma_n,label\n";
  std::string modes = "mode";
  const std::size_t n = decomp.size();
  for (std::size_t j = 1; j <= n; ++j) modes += ",p_" + std::to_string(j);
  modes += '\n';
  double rate_sum = 0.0;
  double min_rate = decomp.size() ? decomp.decay_rate(0) : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    rate_sum += decomp.decay_rate(k);
    min_rate = std::min(min_rate, decomp.decay_rate(k));
    eig += std::to_string(k + 1) + ',' + io::format_number(decomp.shift(k)) + ',' +
           io::format_number(decomp.decay_rate(k)) + ',' + labels[k].to_string() + '\n';
    const Eigen::VectorXd mass = decomp.right.col(static_cast<Eigen::Index>(k)).cwiseAbs2();
    const double total = mass.sum();
    modes += std::to_string(k + 1);
    for (Eigen::Index j = 0; j < mass.size(); ++j) modes += ',' + io::format_number(mass(j) / total);
    modes += '\n';
  }

  const double expected = static_cast<double>(n) * config.system.total_rate() / 2.0;
  const double trace_err = std::abs(rate_sum - expected) / expected;
  json meta = {{"command", "spectrum"},
               {"code_version", SWG_VERSION},
               {"config", config.to_json()},
               {"pattern", pattern_json(pattern)},
               {"conditioning",
                {{"biorthogonality_residual", decomp.biorthogonality_residual},
                 {"eigen_residual", decomp.eigen_residual},
                 {"condition_number", decomp.condition_number},
                 {"gate", kDefaultConditioningGate}}},
               {"checks",
                {{"trace_identity", {{"relative_error", trace_err}, {"passed", trace_err <= kTraceTol}}},
                 {"passivity", {{"min_gamma_n", min_rate}, {"passed", min_rate >= -kPassivityTol * config.system.gamma}}},
                 {"matrix", matrix_checks(m, config.system)}}}};

  const auto& dir = config.output_dir;
  std::vector<std::filesystem::path> written{dir / "eigenvalues.csv", dir / "modes.csv", dir / "meta.json"};
  io::write_file_atomic(written[0], eig);
  io::write_file_atomic(written[1], modes);
  io::write_file_atomic(written[2], meta.dump(2) + "\n");
  return written;
}

std::vector<std::filesystem::path> cmd_sweep(const SweepCommand& cmd) {
  SweepOptions options;
  options.workers = cmd.workers;
  options.output_dir = cmd.output_dir;
  options.stop_after = cmd.stop_after;
  options.quiet = cmd.quiet;

  std::optional<SweepSpec> spec;
  if (!cmd.spec_file.empty()) {
    json j;
    try {
      j = json::parse(io::read_file(cmd.spec_file));
    } catch (const json::parse_error& e) {
      throw ConfigError("spec file is not valid JSON: " + std::string(e.what()));
    }
    spec = SweepSpec::from_json(j);
  }
  if (!cmd.resume_manifest.empty()) {
    resume_sweep(cmd.resume_manifest, options, spec, cmd.force);
  } else {
    if (!spec) throw ConfigError("sweep needs a spec file or --resume");
    run_sweep(*spec, options);
  }
  return {cmd.output_dir / "sweep.csv", cmd.output_dir / "manifest.json"};
}

std::string cmd_pattern(const PatternSource& source, std::size_t n_sites, bool canonical) {
  const auto pattern = source.resolve(n_sites);
  if (canonical) return serialize(pattern) + '\n';
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const double d = pattern[i];
    const std::string value = d == 1.0 ? "+1" : (d == -1.0 ? "-1" : (d == 0.0 ? "0" : io::format_number(d)));
    out += std::to_string(i + 1) + ' ' + value + '\n';
  }
  return out;
}

}  // namespace swg

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

// swg: command-line front end (simulate, spectrum, sweep, pattern).

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "swg/commands.hpp"
#include "swg/error.hpp"
#include "swg/io.hpp"

namespace {

using nlohmann::json;

// Flags shared by simulate and spectrum; anything given overrides --config.
struct PhysicsFlags {
  std::string config_file;
  std::optional<std::string> builtin, dsl, xi, phase, init, out;
  std::optional<std::size_t> n, width, o_left, site;
  std::optional<double> eta, beta, gamma, t_end, dt_out, threshold, rtol, atol;
  std::vector<std::size_t> modes;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON run configuration");
    app->add_option("--builtin", builtin, "Builtin structure S1..S4");
    app->add_option("--dsl", dsl, "Pattern DSL text, e.g. \"(R L)*27\"");
    app->add_option("--n", n, "Number of sites");
    app->add_option("--width", width, "S1 center width");
    app->add_option("--o-left", o_left, "S2 reciprocal site (1-based)");
    app->add_option("--xi", xi, "Spacing k_s d, number or expression like pi/2");
    app->add_option("--eta", eta, "Chirality factor in [0,1]");
    app->add_option("--beta", beta, "Coupling efficiency in (0,1]");
    app->add_option("--gamma", gamma, "Guided decay rate (default 1)");
    app->add_option("--init", init, "single_site | both_edges | mode_quench");
    app->add_option("--site", site, "Site for single_site (1-based)");
    app->add_option("--phase", phase, "Relative phase for both_edges");
    app->add_option("--modes", modes, "Mode indices for mode_quench (1-based)")->delimiter(',');
    app->add_option("--t-end", t_end, "Final time in 1/gamma");
    app->add_option("--dt-out", dt_out, "Output sampling step");
    app->add_option("--threshold", threshold, "Population fraction for s_st");
    app->add_option("--rtol", rtol);
    app->add_option("--atol", atol);
    app->add_option("--out", out, "Output directory");
  }

  json merged() const {
    json j = json::object();
    if (!config_file.empty()) {
      try {
        j = json::parse(swg::io::read_file(config_file));
      } catch (const json::parse_error& e) {
        throw swg::ConfigError("config file is not valid JSON: " + std::string(e.what()));
      }
      if (!j.is_object()) throw swg::ConfigError("config file must hold a JSON object");
    }
    if (builtin || dsl) j["pattern"] = builtin ? json{{"builtin", *builtin}} : json{{"dsl", *dsl}};
    if (width || o_left) {
      if (!j.contains("pattern")) throw swg::ConfigError("--width/--o-left need a builtin pattern");
      if (width) j["pattern"]["center_width"] = *width;
      if (o_left) j["pattern"]["o_left"] = *o_left;
    }
    if (n) j["n_sites"] = *n;
    if (xi) {
      char* end = nullptr;
      const double v = std::strtod(xi->c_str(), &end);
      j["xi"] = (end != xi->c_str() && *end == '\0') ? json(v) : json(*xi);
    }
    const auto set = [&](const char* key, const std::optional<double>& v) {
      if (v) j[key] = *v;
    };
    set("eta", eta);
    set("beta", beta);
    set("gamma", gamma);
    set("t_end", t_end);
    set("dt_out", dt_out);
    set("threshold", threshold);
    set("rtol", rtol);
    set("atol", atol);
    if (init) {
      json s = {{"kind", *init}};
      if (site) s["site"] = *site;
      if (phase) s["phase"] = *phase;
      if (!modes.empty()) s["modes"] = modes;
      j["initial_state"] = s;
    } else if (site || phase || !modes.empty()) {
      throw swg::ConfigError("--site/--phase/--modes need --init");
    }
    if (out) j["output_dir"] = *out;
    return j;
  }
};

int report(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excitation transport in waveguide-coupled emitter arrays with patterned directionality"};
  app.require_subcommand(1);

  PhysicsFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Integrate the amplitude equations and write populations");
  sim_flags.attach(simulate);

  PhysicsFlags spec_flags;
  auto* spectrum = app.add_subcommand("spectrum", "Biorthogonal eigenmodes of the effective Hamiltonian");
  spec_flags.attach(spectrum);

  swg::SweepCommand sweep_cmd;
  sweep_cmd.quiet = false;
  std::string spec_file, resume_file, sweep_out = "sweep_out";
  auto* sweep = app.add_subcommand("sweep", "Steady spread over (eta, xi, beta) grids");
  sweep->add_option("spec", spec_file, "Sweep spec JSON");
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--resume", resume_file, "Manifest to resume");
  sweep->add_flag("--force", sweep_cmd.force, "Discard old cells on config-hash mismatch");
  sweep->add_option("--workers", sweep_cmd.workers, "Worker threads (default: SWG_WORKERS or all cores)");
  sweep->add_option("--stop-after", sweep_cmd.stop_after, "Stop after N (eta, xi) groups");
  bool sweep_quiet = false;
  sweep->add_flag("--quiet", sweep_quiet, "No progress output");

  std::optional<std::string> pat_dsl, pat_builtin;
  std::optional<std::size_t> pat_n, pat_width, pat_o_left;
  bool canonical = false;
  auto* pattern = app.add_subcommand("pattern", "Expand a pattern and list (site, D)");
  pattern->add_option("--dsl", pat_dsl, "Pattern DSL text");
  pattern->add_option("--builtin", pat_builtin, "Builtin structure S1..S4");
  pattern->add_option("--n", pat_n, "Number of sites");
  pattern->add_option("--width", pat_width, "S1 center width");
  pattern->add_option("--o-left", pat_o_left, "S2 reciprocal site (1-based)");
  pattern->add_flag("--canonical", canonical, "Print the canonical DSL form instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return swg::kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      for (const auto& p : swg::cmd_simulate(swg::RunConfig::from_json(sim_flags.merged()))) {
        std::cout << p.string() << '\n';
      }
    } else if (spectrum->parsed()) {
      for (const auto& p : swg::cmd_spectrum(swg::RunConfig::from_json(spec_flags.merged()))) {
        std::cout << p.string() << '\n';
      }
    } else if (sweep->parsed()) {
      sweep_cmd.spec_file = spec_file;
      sweep_cmd.resume_manifest = resume_file;
      sweep_cmd.output_dir = sweep_out;
      sweep_cmd.quiet = sweep_quiet;
      for (const auto& p : swg::cmd_sweep(sweep_cmd)) std::cout << p.string() << '\n';
    } else if (pattern->parsed()) {
      if (pat_dsl.has_value() == pat_builtin.has_value()) {
        throw swg::ConfigError("pattern needs exactly one of --dsl or --builtin");
      }
      swg::PatternSource src;
      if (pat_builtin) {
        src.builtin = swg::parse_structure(*pat_builtin);
        src.params.center_width = pat_width;
        src.params.o_left = pat_o_left;
      } else {
        src.dsl = *pat_dsl;
      }
      std::cout << swg::cmd_pattern(src, pat_n.value_or(0), canonical);
    }
  } catch (const swg::ConfigError& e) {
    return report(e, swg::kExitConfig);
  } catch (const swg::NumericalError& e) {
    return report(e, swg::kExitNumerical);
  } catch (const swg::ConditioningError& e) {
    std::cerr << "error: " << e.what() << '\n' << "residual: " << e.residual() << '\n';
    return swg::kExitConditioning;
  } catch (const std::exception& e) {
    return report(e, 1);
  }
  return swg::kExitOk;
}

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

// Acceptance run: one line per headline criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../oracles.hpp"
#include "swg/commands.hpp"
#include "swg/dynamics.hpp"
#include "swg/error.hpp"
#include "swg/io.hpp"
#include "swg/observables.hpp"
#include "swg/pattern.hpp"
#include "swg/spectral.hpp"
#include "swg/sweep.hpp"

using namespace swg;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

SystemConfig cfg(std::size_t n, double xi, double eta, double beta = 1.0) {
  SystemConfig c;
  c.n_sites = n;
  c.spacing = xi;
  c.chirality = eta;
  c.beta = beta;
  return c;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double total(const std::vector<cplx>& a) {
  double p = 0.0;
  for (const auto& x : a) p += std::norm(x);
  return p;
}

// ---------------------------------------------------------------------------

Outcome four_atom() {
  std::mt19937_64 rng(101);
  const auto m_pattern = builtin_structure(Structure::S3, 4);
  double worst = 0.0;
  for (double xi : {pi / 4, pi / 2, 1.3}) {
    const auto m = build_propagator(m_pattern, cfg(4, xi, 1.0));
    for (int trial = 0; trial < 5; ++trial) {
      const auto a0 = oracle::random_state(rng, 4);
      const auto traj = evolve_ode(m, AmplitudeState{a0, 0.0}, 10.0, 0.05);
      for (std::size_t k = 0; k < traj.n_samples(); ++k) {
        const auto exact = analytic_s3_four_atom(std::span<const cplx, 4>(a0.data(), 4), xi, 1.0, traj.times[k]);
        for (std::size_t j = 0; j < 4; ++j) worst = std::max(worst, std::abs(traj.states[k][j] - exact[j]));
      }
    }
  }
  return {worst < 1e-8, fmt("max |a_ode - a_exact| = %.2e over 15 runs, t in [0,10]", worst)};
}

Outcome centre_subradiant_eigenvalue() {
  const auto dec = decompose(build_propagator(builtin_structure(Structure::S1, 54), cfg(54, pi / 2, 0.999)));
  const double w = dec.shift(0), g = dec.decay_rate(0);
  const bool ok = std::abs(w - (-0.5250)) <= 0.01 && std::abs(g - 0.00581) <= 0.001;
  return {ok, fmt("lambda_1 = %.6f - %.6fi (target -0.5250 - 0.00581i)", w, g)};
}

// Period of a decaying oscillation: periodogram peak of the decay-compensated,
// detrended signal, refined by golden-section search.
double dominant_frequency(const std::vector<double>& t, const std::vector<double>& f, double lo, double hi) {
  const std::size_t n = t.size();
  double st = 0, sf = 0, stt = 0, stf = 0;
  for (std::size_t k = 0; k < n; ++k) {
    st += t[k];
    sf += f[k];
    stt += t[k] * t[k];
    stf += t[k] * f[k];
  }
  const double slope = (n * stf - st * sf) / (n * stt - st * st);
  const double icpt = (sf - slope * st) / n;
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) r[k] = f[k] - icpt - slope * t[k];
  const auto power = [&](double w) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += r[k] * std::polar(1.0, -w * t[k]);
    return std::norm(acc);
  };
  double best = lo, best_p = -1.0;
  for (double w = lo; w <= hi; w += 1e-3) {
    const double p = power(w);
    if (p > best_p) {
      best_p = p;
      best = w;
    }
  }
  double a = best - 1e-3, b = best + 1e-3;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (power(c) > power(d)) b = d; else a = c;
  }
  return (a + b) / 2.0;
}

Outcome off_centre_modes() {
  const auto m = build_propagator(builtin_structure(Structure::S2, 54), cfg(54, pi / 2, 0.999));
  const auto dec = decompose(m);
  const auto labels = classify_modes(dec);
  const auto nearest = [&](double target) {
    std::size_t best = dec.size();
    for (std::size_t k = 0; k < dec.size(); ++k) {
      if (labels[k].rate == RateClass::Radiant) continue;
      if (best == dec.size() || std::abs(dec.shift(k) - target) < std::abs(dec.shift(best) - target)) best = k;
    }
    return best;
  };
  const std::size_t a = nearest(-0.126), b = nearest(0.291);
  if (a == dec.size() || b == dec.size()) return {false, "no subradiant modes"};
  const bool shifts_ok = std::abs(dec.shift(a) + 0.126) <= 0.01 && std::abs(dec.shift(b) - 0.291) <= 0.01;

  // two-mode quench, then read the beat off the site where the modes overlap most
  const auto a0 = mode_quench(dec, {{a, b}, {}});
  const auto traj = evolve_ode(m, a0, 120.0, 0.05);
  std::size_t site = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < 54; ++j) {
    const double w = std::abs(dec.right(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) *
                              dec.right(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)));
    if (w > best) {
      best = w;
      site = j;
    }
  }
  const double rate = dec.decay_rate(a) + dec.decay_rate(b);
  std::vector<double> f(traj.n_samples());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::norm(traj.states[k][site]) * std::exp(rate * traj.times[k]);
  const double w = dominant_frequency(traj.times, f, 0.1, 1.0);
  const double period = 2 * pi / w, target = 2 * pi / (0.291 + 0.126);
  const bool period_ok = std::abs(period - target) <= 0.05 * target;
  return {shifts_ok && period_ok,
          fmt("modes %zu,%zu at omega = %.4f, %.4f; beat period %.3f vs %.3f (%.2f%%) at site %zu", a + 1, b + 1,
              dec.shift(a), dec.shift(b), period, target, 100 * std::abs(period - target) / target, site + 1)};
}

Outcome triplet_beats() {
  const auto dec = decompose(build_propagator(builtin_structure(Structure::S4, 54), cfg(54, pi / 2, 0.999)));
  ModeSelection top;
  for (std::size_t k = 0; k < 16; ++k) top.indices.push_back(k);
  const auto beats = beat_frequencies(dec, top);
  const auto closest = [&](double target) {
    double best = beats.front();
    for (double b : beats) {
      if (std::abs(b - target) < std::abs(best - target)) best = b;
    }
    return best;
  };
  const double b1 = closest(0.467), b2 = closest(0.048);
  const auto labels = classify_modes(dec);
  const auto edges = std::count_if(labels.begin(), labels.end(), [](const ModeLabel& l) { return l.edge; });
  const bool ok = std::abs(b1 - 0.467) <= 0.01 && std::abs(b2 - 0.048) <= 0.01 && edges >= 2;
  return {ok, fmt("beats %.4f and %.4f among the 16 most subradiant modes; %ld edge modes", b1, b2, edges)};
}

Trajectory edge_start_run(Structure s, double t_end, double beta = 1.0, Tolerances tol = {}) {
  const auto m = build_propagator(builtin_structure(s, 54), cfg(54, pi / 2, 1.0, beta));
  return evolve_ode(m, initial_state(BothEdges{}, 54), t_end, 0.1, tol);
}

Outcome subradiance() {
  std::string detail;
  bool ok = true;
  for (auto s : {Structure::S1, Structure::S2, Structure::S3, Structure::S4}) {
    const auto traj = edge_start_run(s, 10.0);
    const double p10 = total(traj.states.back());
    ok = ok && p10 > std::exp(-10.0);
    detail += fmt("%s P(10)=%.3f ", std::string(structure_name(s)).c_str(), p10);
  }
  const auto s3 = edge_start_run(Structure::S3, 120.0);
  const double p90 = total(s3.states[900]), p120 = total(s3.states[1200]);
  ok = ok && p90 >= 10.0 * p120;
  detail += fmt("| S3 P(90)/P(120) = %.3g", p90 / p120);
  return {ok, detail};
}

Outcome spread_trends() {
  bool ok = true;
  std::string detail;
  {
    const auto sp = spread(edge_start_run(Structure::S1, 150.0));
    double worst = -1.0;
    for (std::size_t k = 51; k < sp.s.size(); ++k) worst = std::max(worst, sp.s[k] - sp.s[k - 1]);
    ok = ok && worst <= 1e-3;
    detail += fmt("S1 max rise after t=5: %.2e; ", worst);
  }
  {
    const auto st = steady_spread(edge_start_run(Structure::S2, 150.0));
    ok = ok && st.flag == SteadyFlag::Hit && st.s_st >= 0.3 && st.s_st <= 0.5;
    detail += fmt("S2 s_st=%.3f; ", st.s_st);
  }
  {
    const auto traj = edge_start_run(Structure::S3, 150.0);
    const auto st = steady_spread(traj);
    const auto sp = spread(traj);
    double peak = 0.0;
    for (std::size_t k = 0; k < sp.s.size() && sp.times[k] <= st.t_hit; ++k) peak = std::max(peak, sp.s[k]);
    ok = ok && peak > 0.9;
    detail += fmt("S3 max s before decay=%.3f; ", peak);
  }
  {
    const auto st = steady_spread(edge_start_run(Structure::S4, 150.0));
    ok = ok && st.flag == SteadyFlag::Hit && st.s_st >= 0.6 && st.s_st <= 0.8;
    detail += fmt("S4 s_st=%.3f", st.s_st);
  }
  return {ok, detail};
}

Outcome beta_identity() {
  const Tolerances tight{1e-13, 1e-30};
  double worst = 0.0;
  bool ordered = true;
  for (auto s : {Structure::S1, Structure::S2, Structure::S3, Structure::S4}) {
    const auto ref = edge_start_run(s, 150.0, 1.0, tight);
    std::vector<std::vector<double>> family{{}};
    for (const auto& a : ref.states) family[0].push_back(total(a));
    for (double beta : {0.999, 0.99, 0.95}) {
      const auto traj = edge_start_run(s, 150.0, beta, tight);
      const double loss = (1.0 - beta) / beta;
      std::vector<double> p;
      for (std::size_t k = 0; k < traj.n_samples(); ++k) {
        p.push_back(total(traj.states[k]));
        const double expected = family[0][k] * std::exp(-loss * traj.times[k]);
        worst = std::max(worst, std::abs(p.back() - expected) / expected);
      }
      family.push_back(std::move(p));
    }
    for (std::size_t f = 1; f < family.size(); ++f) {
      for (std::size_t k = 1; k < family[f].size(); ++k) ordered = ordered && family[f][k] < family[f - 1][k];
    }
  }
  return {worst <= 1e-9 && ordered,
          fmt("max relative deviation %.2e (S1-S4, t in [0,150]); strict ordering %s", worst, ordered ? "yes" : "no")};
}

Outcome spectral_suite() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(2, 54);
  double trace_err = 0.0, min_rate = 1e300, bio = 0.0, recon = 0.0, agree = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = size(rng);
    const auto d = oracle::random_pattern(rng, n);
    const auto c = cfg(n, 2 * pi * u(rng) + 1e-3, 0.999 * u(rng), trial % 2 ? 1.0 : 0.9 + 0.1 * u(rng));
    const auto m = build_propagator(DirectionalityPattern(d), c);
    const auto dec = decompose(m);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += dec.decay_rate(k);
      min_rate = std::min(min_rate, dec.decay_rate(k));
    }
    const double expected = static_cast<double>(n) * c.total_rate() / 2.0;
    trace_err = std::max(trace_err, std::abs(sum - expected) / expected);
    bio = std::max(bio, dec.biorthogonality_residual);

    const auto a0 = AmplitudeState{oracle::random_state(rng, n), 0.0};
    const auto alpha = overlaps(dec, a0);
    Eigen::VectorXcd rebuilt = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) rebuilt += alpha[k] * dec.right.col(static_cast<Eigen::Index>(k));
    recon = std::max(recon, (rebuilt - oracle::to_eigen(a0.amplitudes)).cwiseAbs().maxCoeff());

    const auto times = uniform_grid(50.0, 0.5);
    const auto ode = evolve_ode(m, a0, 50.0, 0.5);
    const auto sp = evolve_spectral(dec, a0, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      for (std::size_t j = 0; j < n; ++j) agree = std::max(agree, std::abs(ode.states[k][j] - sp.states[k][j]));
    }
  }
  const bool ok = trace_err <= 1e-10 && min_rate >= -1e-10 && bio < 1e-6 && recon < 1e-8 && agree < 1e-6;
  return {ok, fmt("trace %.1e, min gamma_n %.1e, biorth %.1e, reconstruction %.1e, ode-vs-spectral %.1e", trace_err,
                  min_rate, bio, recon, agree)};
}

Outcome dark_modes() {
  bool ok = true;
  std::string detail;
  for (auto s : {Structure::S1, Structure::S4}) {
    const auto dec = decompose(build_propagator(builtin_structure(s, 54), cfg(54, pi, 0.999)));
    std::size_t dark = 0;
    for (std::size_t k = 0; k < dec.size(); ++k) dark += dec.decay_rate(k) < 1e-6;

    SweepSpec spec;
    spec.pattern.builtin = s;
    spec.n_sites = 54;
    spec.eta = {0.999};
    spec.xi = {pi};
    spec.beta = {1.0};
    spec.initial = SingleSite{27};
    const auto cell = run_sweep(spec, {.workers = 1}).cells.at(0);
    const bool capped = cell.status == CellStatus::Ok && cell.capped;
    ok = ok && dark >= 1 && capped;
    detail += fmt("%s: %zu dark modes, cell %s (P=%.3f at t=%.0f); ", std::string(structure_name(s)).c_str(), dark,
                  capped ? "capped" : "not capped", cell.p_final, cell.t_hit);
  }
  return {ok, detail + "centre-site start"};
}

// Random nested pattern; the expected expansion is built alongside the text.
std::string random_pattern_text(std::mt19937_64& rng, int depth, std::vector<double>& values) {
  std::uniform_int_distribution<int> items(1, 4), kind(0, depth > 0 ? 2 : 1), count(1, 5), atom(0, 2), ws(0, 2);
  const char letters[] = {'R', 'O', 'L'};
  const double signs[] = {1.0, 0.0, -1.0};
  std::string out;
  const int n = items(rng);
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out += std::string(static_cast<std::size_t>(ws(rng)) + 1, ' ');
    const int k = kind(rng);
    if (k == 2) {
      std::vector<double> inner;
      const std::string text = random_pattern_text(rng, depth - 1, inner);
      const int c = count(rng);
      out += "(" + text + ")*" + std::to_string(c);
      for (int r = 0; r < c; ++r) values.insert(values.end(), inner.begin(), inner.end());
    } else {
      const int a = atom(rng);
      const int c = k == 1 ? count(rng) : 1;
      out += letters[a];
      if (k == 1) out += "*" + std::to_string(c);
      values.insert(values.end(), static_cast<std::size_t>(c), signs[a]);
    }
  }
  return out;
}

Outcome dsl_suite() {
  std::mt19937_64 rng(4242);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> expected;
    const std::string text = random_pattern_text(rng, 3, expected);
    const auto p = expand(parse_pattern(text));
    const std::vector<double> got(p.values().begin(), p.values().end());
    const auto canonical = serialize(p);
    const bool round_trip = expand(parse_pattern(canonical)) == p && serialize(expand(parse_pattern(canonical))) == canonical;
    if (got != expected || !round_trip) ++bad;
  }
  const std::vector<std::pair<std::string, std::size_t>> errors{
      {"R*0", 2}, {"(R L)*0", 6}, {"(R L", 0}, {"R L)", 3}, {"((R)*2", 0}, {"(R (L)*0)*2", 7}, {"()*2", 0}, {"R X", 2},
      {"", 0}};
  int missed = 0;
  for (const auto& [text, offset] : errors) {
    try {
      parse_pattern(text);
      ++missed;
    } catch (const ParseError& e) {
      if (e.offset() != offset) ++missed;
    }
  }
  return {bad == 0 && missed == 0, fmt("%d/1000 round-trip failures; %d/%zu error cases wrong", bad, missed, errors.size())};
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "swg_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const nlohmann::json spec = {{"pattern", {{"builtin", "S2"}}},
                               {"n_sites", 54},
                               {"eta", {{"linspace", {0.6, 1.0, 5}}}},
                               {"xi", {0.4, 0.9, 1.4, 1.9, 2.4}}};
  io::write_file_atomic(root / "spec.json", spec.dump(2));
  const auto run = [&](const std::string& name, unsigned workers, std::size_t stop_after) {
    SweepCommand cmd;
    cmd.spec_file = root / "spec.json";
    cmd.output_dir = root / name;
    cmd.workers = workers;
    cmd.stop_after = stop_after;
    cmd_sweep(cmd);
    return root / name / "sweep.csv";
  };
  const auto one = io::read_file(run("w1", 1, 0));
  const auto eight = io::read_file(run("w8", 8, 0));
  run("resumed", 2, 7);
  const bool was_partial = io::read_file(root / "resumed" / "sweep.csv").find("pending") != std::string::npos;
  SweepCommand resume;
  resume.resume_manifest = root / "resumed" / "manifest.json";
  resume.output_dir = root / "resumed";
  resume.workers = 3;
  cmd_sweep(resume);
  const auto resumed = io::read_file(root / "resumed" / "sweep.csv");
  const bool ok = one == eight && was_partial && resumed == one;
  fs::remove_all(root);
  return {ok, fmt("1 vs 8 workers %s; interrupted+resumed %s (25 cells)", one == eight ? "identical" : "DIFFER",
                  resumed == one ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"four-atom oracle equivalence", four_atom},
      {"most subradiant eigenvalue, centre-reciprocal array", centre_subradiant_eigenvalue},
      {"mode shifts and two-mode beat, off-centre array", off_centre_modes},
      {"beat frequencies and edge modes, triplet array", triplet_beats},
      {"subradiance and late population drop", subradiance},
      {"spread trends at full chirality", spread_trends},
      {"nonguided-loss identity and ordering", beta_identity},
      {"spectral invariant suite", spectral_suite},
      {"dark modes at Bragg spacing", dark_modes},
      {"pattern DSL property suite", dsl_suite},
      {"sweep determinism and resume", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-52s %8.2fs  %s\n", out.pass ? "PASS" : "FAIL", name, secs, out.detail.c_str());
    std::fflush(stdout);
    failed += !out.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

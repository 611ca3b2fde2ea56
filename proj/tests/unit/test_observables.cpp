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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "swg/dynamics.hpp"
#include "swg/error.hpp"
#include "swg/observables.hpp"

using namespace swg;
using std::numbers::pi;

namespace {

SystemConfig cfg(std::size_t n, double xi, double eta, double beta = 1.0) {
  SystemConfig c;
  c.n_sites = n;
  c.spacing = xi;
  c.chirality = eta;
  c.beta = beta;
  return c;
}

}  // namespace

TEST_CASE("spread of simple distributions") {
  const std::vector<double> edges{0.5, 0.0, 0.0, 0.5};
  CHECK(spread_of(edges).s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spread_of(edges).x_cm == doctest::Approx(0.0));
  const std::vector<double> point{0.0, 0.2, 0.0};
  CHECK(spread_of(point).s == 0.0);
  CHECK(spread_of(point).x_cm == 0.0);
  const std::vector<double> flat{1.0, 1.0, 1.0};
  CHECK(spread_of(flat).s == doctest::Approx(0.816496580927726).epsilon(1e-14));
  // normalisation by P_tot: scaling the populations changes nothing
  const std::vector<double> skew{0.1, 0.3, 0.6}, skew_scaled{0.001, 0.003, 0.006};
  CHECK(spread_of(skew).s == doctest::Approx(spread_of(skew_scaled).s).epsilon(1e-14));

  const std::vector<double> single{1.0};
  CHECK_THROWS_AS(spread_of(single), ConfigError);
  const std::vector<double> gone{1e-16, 0.0};
  CHECK_FALSE(spread_of(gone).defined);
  CHECK(std::isnan(spread_of(gone).s));
}

TEST_CASE("cascaded pair reaches the threshold at ln 10") {
  // site 2 of a (+1, +1) pair at eta = 1 is never driven by site 1
  const auto m = build_propagator(DirectionalityPattern({1, 1}), cfg(2, 1.0, 1.0));
  const auto traj = evolve_ode(m, initial_state(SingleSite{2}, 2), 5.0, 0.01);
  const auto st = steady_spread(traj);
  CHECK(st.flag == SteadyFlag::Hit);
  CHECK(st.t_hit == doctest::Approx(2.302585092994046).epsilon(1e-4));
  CHECK(st.s_st == doctest::Approx(0.0));
}

TEST_CASE("threshold never reached is flagged") {
  const auto m = build_propagator(builtin_structure(Structure::S2, 54), cfg(54, pi / 2, 1.0));
  const auto traj = evolve_ode(m, initial_state(BothEdges{}, 54), 5.0, 0.1);
  const auto st = steady_spread(traj);
  CHECK(st.flag == SteadyFlag::Capped);
  CHECK(st.t_hit == doctest::Approx(5.0));
  CHECK(std::isfinite(st.s_st));
}

TEST_CASE("lower thresholds are reached later") {
  const auto m = build_propagator(builtin_structure(Structure::S1, 54), cfg(54, pi / 2, 0.9));
  const auto traj = evolve_ode(m, initial_state(BothEdges{}, 54), 600.0, 0.1);
  double prev = 0.0;
  for (double th : {0.5, 0.3, 0.1, 0.05}) {
    const auto st = steady_spread(traj, th);
    REQUIRE(st.flag == SteadyFlag::Hit);
    CHECK(st.t_hit > prev);
    prev = st.t_hit;
  }
}

TEST_CASE("mirror-symmetric arrays keep the centre of mass at zero") {
  for (auto s : {Structure::S1, Structure::S3}) {
    const auto pattern = builtin_structure(s, 54);
    // S1 flips sign under reflection; the symmetric start stays centred
    const auto m = build_propagator(pattern, cfg(54, pi / 2, 1.0));
    const auto traj = evolve_ode(m, initial_state(BothEdges{}, 54), 30.0, 1.0);
    const auto sp = spread(traj);
    for (std::size_t k = 0; k < sp.x_cm.size(); ++k) CHECK(std::abs(sp.x_cm[k]) < 1e-8);
  }
}

TEST_CASE("subradiance ratio") {
  const auto one = build_propagator(DirectionalityPattern({1}), cfg(1, 1.0, 1.0));
  const auto traj = evolve_ode(one, initial_state(SingleSite{1}, 1), 10.0, 0.5);
  for (double r : subradiance_ratio(traj)) CHECK(r == doctest::Approx(1.0).epsilon(1e-7));

  const auto p = builtin_structure(Structure::S3, 54);
  const auto a = evolve_ode(build_propagator(p, cfg(54, pi / 2, 1.0)), initial_state(BothEdges{}, 54), 20.0, 1.0);
  const auto b = evolve_ode(build_propagator(p, cfg(54, pi / 2, 1.0, 0.95)), initial_state(BothEdges{}, 54), 20.0, 1.0);
  const auto ra = subradiance_ratio(a), rb = subradiance_ratio(b);
  for (std::size_t k = 1; k < ra.size(); ++k) CHECK(rb[k] < ra[k]);
  CHECK(ra.back() > 1.0);
}

TEST_CASE("populations of a trajectory") {
  Trajectory t;
  t.times = {0.0, 1.0};
  t.states = {{cplx(0.6, 0.0), cplx(0.0, 0.8)}, {cplx(0.3, 0.4), cplx(0.0)}};
  const auto p = populations(t);
  CHECK(p.total[0] == doctest::Approx(1.0));
  CHECK(p.total[1] == doctest::Approx(0.25));
  CHECK(p.sites[0][1] == doctest::Approx(0.64));
}

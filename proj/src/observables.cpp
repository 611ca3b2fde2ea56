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

#include "swg/observables.hpp"

#include <cmath>
#include <limits>

#include "swg/error.hpp"

namespace swg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

std::vector<double> site_populations(std::span<const cplx> amps) {
  std::vector<double> n(amps.size());
  for (std::size_t j = 0; j < amps.size(); ++j) n[j] = std::norm(amps[j]);
  return n;
}

PopulationSeries populations(const Trajectory& traj) {
  PopulationSeries out;
  out.times = traj.times;
  out.sites.reserve(traj.states.size());
  out.total.reserve(traj.states.size());
  for (const auto& state : traj.states) {
    out.sites.push_back(site_populations(state));
    out.total.push_back(sum(out.sites.back()));
  }
  return out;
}

SpreadSample spread_of(std::span<const double> n) {
  const std::size_t count = n.size();
  if (count < 2) throw ConfigError("spread needs at least two sites");
  SpreadSample out;
  const double total = sum(n);
  if (!(total >= kMinPopulation)) {
    out.x_cm = kNaN;
    out.s = kNaN;
    return out;
  }
  const double step = 2.0 / static_cast<double>(count - 1);
  double x_cm = 0.0;
  for (std::size_t j = 0; j < count; ++j) x_cm += (step * static_cast<double>(j) - 1.0) * (n[j] / total);
  double var = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double dx = step * static_cast<double>(j) - 1.0 - x_cm;
    var += dx * dx * (n[j] / total);
  }
  out.x_cm = x_cm;
  out.s = std::sqrt(var);
  out.defined = true;
  return out;
}

SpreadSeries spread(const Trajectory& traj) {
  if (traj.n_sites() < 2) throw ConfigError("spread needs at least two sites");
  SpreadSeries out;
  out.times = traj.times;
  for (const auto& state : traj.states) {
    const auto sample = spread_of(site_populations(state));
    out.x_cm.push_back(sample.x_cm);
    out.s.push_back(sample.s);
    out.defined.push_back(sample.defined);
  }
  return out;
}

SteadySpreadTracker::SteadySpreadTracker(double threshold) : threshold_(threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) throw ConfigError("threshold must be > 0");
}

bool SteadySpreadTracker::observe(double t, std::span<const double> n) {
  if (done_) return true;
  const double p = sum(n);
  const double s = n.size() >= 2 ? spread_of(n).s : kNaN;
  if (!started_) {
    started_ = true;
    target_ = threshold_ * p;
    if (p <= target_) {
      hit_ = {s, t, SteadyFlag::Hit};
      done_ = true;
    }
  } else if (p <= target_) {
    // Linear interpolation of both P_tot and s between the bracketing samples.
    const double frac = prev_p_ == p ? 1.0 : (prev_p_ - target_) / (prev_p_ - p);
    hit_.t_hit = prev_t_ + frac * (t - prev_t_);
    hit_.s_st = prev_s_ + frac * (s - prev_s_);
    hit_.flag = SteadyFlag::Hit;
    done_ = true;
  }
  prev_t_ = t;
  prev_p_ = p;
  prev_s_ = s;
  return done_;
}

SteadySpread SteadySpreadTracker::result() const {
  if (done_) return hit_;
  return {prev_s_, prev_t_, SteadyFlag::Capped};
}

SteadySpread steady_spread(const Trajectory& traj, double threshold) {
  if (traj.states.empty()) throw ConfigError("empty trajectory");
  SteadySpreadTracker tracker(threshold);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    if (tracker.observe(traj.times[k], site_populations(traj.states[k]))) break;
  }
  return tracker.result();
}

std::vector<double> subradiance_ratio(const Trajectory& traj, double gamma) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out.push_back(sum(site_populations(traj.states[k])) * std::exp(gamma * traj.times[k]));
  }
  return out;
}

}  // namespace swg

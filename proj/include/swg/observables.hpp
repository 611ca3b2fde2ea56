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
#include <span>
#include <vector>

#include "swg/state.hpp"

namespace swg {

struct PopulationSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> sites;  // n_j(t) = |a_j(t)|^2
  std::vector<double> total;               // P_tot(t)
};

std::vector<double> site_populations(std::span<const cplx> amplitudes);

PopulationSeries populations(const Trajectory& traj);

/// Center of mass and spread of the normalized population on positions
/// x_j = 2 (j - 1) / (N - 1) - 1.
struct SpreadSample {
  double x_cm = 0.0;
  double s = 0.0;
  bool defined = false;  // false when P_tot < kMinPopulation
};

inline constexpr double kMinPopulation = 1e-14;

/// Requires N >= 2 (throws ConfigError otherwise).
SpreadSample spread_of(std::span<const double> site_populations);

struct SpreadSeries {
  std::vector<double> times;
  std::vector<double> x_cm;
  std::vector<double> s;
  std::vector<bool> defined;
};

SpreadSeries spread(const Trajectory& traj);

enum class SteadyFlag { Hit, Capped };

struct SteadySpread {
  double s_st = 0.0;    // NaN when N = 1 or the spread is undefined
  double t_hit = 0.0;   // crossing time, or the last sample time when capped
  SteadyFlag flag = SteadyFlag::Capped;
};

/// Streaming form of steady_spread: feed samples in time order until done().
class SteadySpreadTracker {
 public:
  explicit SteadySpreadTracker(double threshold = 0.10);

  /// Returns true once the population has crossed threshold * P_tot(first sample).
  bool observe(double t, std::span<const double> site_populations);

  bool done() const noexcept { return done_; }
  /// Hit result if done(), otherwise the last sample flagged Capped.
  SteadySpread result() const;

 private:
  double threshold_;
  bool started_ = false;
  bool done_ = false;
  double target_ = 0.0;
  double prev_t_ = 0.0;
  double prev_p_ = 0.0;
  double prev_s_ = 0.0;
  SteadySpread hit_;
};

/// s at the first time P_tot <= threshold * P_tot(0), linearly interpolated
/// between samples; s(t_end) flagged Capped when never reached.
SteadySpread steady_spread(const Trajectory& traj, double threshold = 0.10);

/// P_tot(t) * exp(gamma t); above 1 means slower than single-atom decay.
std::vector<double> subradiance_ratio(const Trajectory& traj, double gamma = 1.0);

}  // namespace swg

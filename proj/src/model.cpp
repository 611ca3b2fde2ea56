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

#include "swg/model.hpp"

#include <cmath>
#include <string>

#include "swg/error.hpp"

namespace swg {

void SystemConfig::validate() const {
  if (n_sites < 1) throw ConfigError("n_sites must be >= 1");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ConfigError("spacing (xi) must be > 0");
  if (!(chirality >= 0.0 && chirality <= 1.0)) throw ConfigError("chirality (eta) must lie in [0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in (0, 1]");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be > 0");
}

DirectionalRates directional_rates(const DirectionalityPattern& pattern, const SystemConfig& config) {
  config.validate();
  if (pattern.size() != config.n_sites) {
    throw ConfigError("pattern length " + std::to_string(pattern.size()) + " does not match n_sites " +
                      std::to_string(config.n_sites));
  }
  DirectionalRates rates;
  rates.right.resize(config.n_sites);
  rates.left.resize(config.n_sites);
  for (std::size_t mu = 0; mu < config.n_sites; ++mu) {
    const double d = config.chirality * pattern[mu];
    rates.right[mu] = config.gamma * (1.0 + d) / 2.0;
    rates.left[mu] = config.gamma * (1.0 - d) / 2.0;
  }
  return rates;
}

PropagatorMatrix::PropagatorMatrix(Eigen::MatrixXcd m)
    : n_(static_cast<std::size_t>(m.rows())), m_(std::move(m)), re_(n_ * n_), im_(n_ * n_) {
  if (m_.rows() != m_.cols()) throw ConfigError("propagator must be square");
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) {
      const cplx v = m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      re_[r * n_ + c] = v.real();
      im_[r * n_ + c] = v.imag();
    }
  }
}

PropagatorMatrix build_propagator(const DirectionalRates& rates, const SystemConfig& config) {
  config.validate();
  const std::size_t n = config.n_sites;
  if (rates.right.size() != n || rates.left.size() != n) {
    throw ConfigError("rate vectors do not match n_sites");
  }
  const auto idx = [](std::size_t i) { return static_cast<Eigen::Index>(i); };
  Eigen::MatrixXcd m(idx(n), idx(n));
  const cplx diag(-config.total_rate() / 2.0, 0.0);
  for (std::size_t mu = 0; mu < n; ++mu) {
    for (std::size_t nu = 0; nu < n; ++nu) {
      cplx v;
      if (mu == nu) {
        v = diag;
      } else {
        // nu > mu: emitter nu feeds mu through the left-moving mode, else right-moving.
        const double dist = static_cast<double>(nu > mu ? nu - mu : mu - nu);
        const double amp = nu > mu ? std::sqrt(rates.left[mu] * rates.left[nu])
                                   : std::sqrt(rates.right[mu] * rates.right[nu]);
        v = -amp * std::polar(1.0, -config.spacing * dist);
      }
      m(idx(mu), idx(nu)) = v;
    }
  }
  return PropagatorMatrix(std::move(m));
}

PropagatorMatrix build_propagator(const DirectionalityPattern& pattern, const SystemConfig& config) {
  return build_propagator(directional_rates(pattern, config), config);
}

}  // namespace swg

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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "swg/pattern.hpp"

namespace swg {

using cplx = std::complex<double>;

/// Physical parameters of the array. Rates are in units of gamma, times in 1/gamma.
struct SystemConfig {
  std::size_t n_sites = 1;
  double spacing = 1.5707963267948966;  // xi = k_s d
  double chirality = 1.0;               // eta in [0, 1]
  double beta = 1.0;                    // guided fraction gamma / (gamma + gamma_ng)
  double gamma = 1.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  double nonguided_rate() const { return gamma * (1.0 - beta) / beta; }
  double total_rate() const { return gamma + nonguided_rate(); }
};

struct DirectionalRates {
  std::vector<double> right;
  std::vector<double> left;
};

/// gamma_R = gamma (1 + eta D) / 2, gamma_L = gamma (1 - eta D) / 2.
DirectionalRates directional_rates(const DirectionalityPattern& pattern, const SystemConfig& config);

/// Generator M of the single-excitation amplitudes, da/dt = M a (H_eff = iM).
///
/// Stored twice: as an Eigen matrix for the eigensolver, and as split
/// real/imaginary row-major planes consumed by the SIMD mat-vec kernels.
class PropagatorMatrix {
 public:
  explicit PropagatorMatrix(Eigen::MatrixXcd m);

  std::size_t size() const noexcept { return n_; }
  const Eigen::MatrixXcd& dense() const noexcept { return m_; }
  cplx operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

  std::span<const double> real_plane() const noexcept { return re_; }
  std::span<const double> imag_plane() const noexcept { return im_; }

 private:
  std::size_t n_;
  Eigen::MatrixXcd m_;
  std::vector<double> re_;
  std::vector<double> im_;
};

PropagatorMatrix build_propagator(const DirectionalRates& rates, const SystemConfig& config);

/// Convenience: pattern -> rates -> generator.
PropagatorMatrix build_propagator(const DirectionalityPattern& pattern, const SystemConfig& config);

}  // namespace swg

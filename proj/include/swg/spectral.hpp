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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swg/model.hpp"
#include "swg/state.hpp"

namespace swg {

/// Biorthogonal eigensystem of H_eff = iM.
///
/// Eigenvalues are lambda_n = omega_n - i gamma_n, ordered by ascending decay
/// rate (most subradiant first); rates equal within `kTieTolerance` times the
/// single-site rate are ordered by ascending omega. Column n of `right` is
/// phi_n^R with unit 2-norm; column n of `left` is phi_n^L scaled so that
/// <phi_n^L|phi_n^R> = 1.
struct SpectralDecomposition {
  static constexpr double kTieTolerance = 1e-10;

  std::vector<cplx> eigenvalues;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
  double biorthogonality_residual = 0.0;  // max_mn |<phi_m^L|phi_n^R> - delta_mn|, floored at eps * kappa(R)
  double eigen_residual = 0.0;            // max_n |H phi_n - lambda_n phi_n| / |H|_F
  double condition_number = 0.0;          // |R|_F |R^-1|_F

  std::size_t size() const noexcept { return eigenvalues.size(); }
  double shift(std::size_t n) const { return eigenvalues[n].real(); }
  double decay_rate(std::size_t n) const { return -eigenvalues[n].imag(); }
};

inline constexpr double kDefaultConditioningGate = 1e-6;

/// Throws ConditioningError when the biorthogonality residual exceeds `gate`.
SpectralDecomposition decompose(const PropagatorMatrix& m, double gate = kDefaultConditioningGate);

/// alpha_n = <phi_n^L|a0>.
std::vector<cplx> overlaps(const SpectralDecomposition& decomp, const AmplitudeState& a0);

/// Subset of modes (0-based indices into the sorted spectrum) with complex
/// weights. Empty weights mean equal weights 1/sqrt(|S|).
struct ModeSelection {
  std::vector<std::size_t> indices;
  std::vector<cplx> weights;
};

/// Normalized superposition sum_n w_n phi_n^R.
AmplitudeState mode_quench(const SpectralDecomposition& decomp, const ModeSelection& selection);

enum class RateClass { Dark, Subradiant, Radiant };

struct ModeLabel {
  RateClass rate = RateClass::Radiant;
  bool edge = false;

  std::string to_string() const;
};

struct ModeThresholds {
  double gamma = 1.0;
  double dark = 1e-6;        // gamma_n < dark * gamma
  double subradiant = 0.5;   // gamma_n < subradiant * gamma
  double edge_mass = 0.6;    // fraction of |phi^R|^2 in a boundary cell
  std::size_t edge_sites = 3;
};

std::vector<ModeLabel> classify_modes(const SpectralDecomposition& decomp,
                                      const ModeThresholds& thresholds = {});

/// All pairwise |omega_m - omega_n| over the selection, ascending.
std::vector<double> beat_frequencies(const SpectralDecomposition& decomp, const ModeSelection& selection);

}  // namespace swg

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

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "swg/kernels.hpp"
#include "swg/model.hpp"
#include "swg/spectral.hpp"
#include "swg/state.hpp"

namespace swg {

// Initial-state kinds. Site indices are 1-based.
struct SingleSite {
  std::size_t site = 1;
};
struct BothEdges {
  double phase = 0.0;  // (|1> + e^{i phase}|N>) / sqrt(2)
};
struct CustomAmplitudes {
  std::vector<cplx> amplitudes;
};
struct ModeQuench {
  ModeSelection selection;
};
using InitialStateKind = std::variant<SingleSite, BothEdges, CustomAmplitudes, ModeQuench>;

/// Unit-norm state at t = 0. ModeQuench requires `decomp`.
AmplitudeState initial_state(const InitialStateKind& kind, std::size_t n_sites,
                             const SpectralDecomposition* decomp = nullptr);

struct Tolerances {
  double rtol = 1e-9;
  double atol = 1e-12;
};

/// Adaptive Dormand-Prince 5(4) integrator for da/dt = M a.
///
/// Keeps its step-size controller between calls, so advancing in several
/// chunks takes exactly the same steps as one call over the same sample
/// times. The matrix must outlive the propagator.
class AmplitudePropagator {
 public:
  AmplitudePropagator(const PropagatorMatrix& m, const AmplitudeState& a0, Tolerances tol = {},
                      const kernels::KernelTable& kernels = kernels::active());

  /// Integrates up to exactly `t` (>= time()). Throws NumericalError.
  void advance_to(double t);

  double time() const noexcept { return t_; }
  std::size_t size() const noexcept { return n_; }
  std::vector<cplx> amplitudes() const;

  /// |a_mu|^2 into `out` (size N).
  void populations(std::span<double> out) const;

  std::size_t accepted_steps() const noexcept { return accepted_; }
  std::size_t rejected_steps() const noexcept { return rejected_; }

 private:
  void rhs(const double* y, double* dy) const;

  const PropagatorMatrix* m_;
  const kernels::KernelTable* kt_;
  Tolerances tol_;
  std::size_t n_;
  double t_;
  double h_;
  std::vector<double> y_;
  std::vector<double> y_new_;
  std::vector<double> tmp_;
  std::vector<double> err_;
  std::vector<double> zero_;
  std::array<std::vector<double>, 7> k_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

/// times[k] = k * dt_out for k * dt_out <= t_end (up to rounding).
std::vector<double> uniform_grid(double t_end, double dt_out);

Trajectory evolve_ode(const PropagatorMatrix& m, const AmplitudeState& a0, double t_end, double dt_out,
                      Tolerances tol = {});

/// a(t) = sum_n alpha_n exp(-i lambda_n t) phi_n^R. Refuses decompositions
/// whose biorthogonality residual exceeds the conditioning gate.
Trajectory evolve_spectral(const SpectralDecomposition& decomp, const AmplitudeState& a0,
                           std::span<const double> times);

/// Closed form for N = 4, pattern (+1,-1,+1,-1), eta = 1, beta = 1.
std::array<cplx, 4> analytic_s3_four_atom(std::span<const cplx, 4> a0, double xi, double gamma, double t);

}  // namespace swg

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
#include <vector>

namespace swg {

using cplx = std::complex<double>;

/// Single-excitation amplitudes a_mu(t) on the basis |e>_mu |g...g>.
struct AmplitudeState {
  std::vector<cplx> amplitudes;
  double time = 0.0;

  std::size_t size() const noexcept { return amplitudes.size(); }
  double norm_squared() const;
};

/// Amplitude vectors sampled on a uniform time grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<cplx>> states;

  std::size_t n_sites() const noexcept { return states.empty() ? 0 : states.front().size(); }
  std::size_t n_samples() const noexcept { return times.size(); }
};

}  // namespace swg

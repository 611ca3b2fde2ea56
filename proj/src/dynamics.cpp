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

#include "swg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swg/error.hpp"

namespace swg {

double AmplitudeState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

namespace {

AmplitudeState normalized(std::vector<cplx> amps) {
  double norm2 = 0.0;
  for (const auto& a : amps) norm2 += std::norm(a);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw ConfigError("initial state must be a nonzero finite vector");
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= inv;
  return AmplitudeState{std::move(amps), 0.0};
}

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
};
// b5 - b4, indexed by stage 0..6.
constexpr double kE[7] = {71.0 / 57600.0,      0.0,           -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0,  -1.0 / 40.0};

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

}  // namespace

AmplitudeState initial_state(const InitialStateKind& kind, std::size_t n_sites, const SpectralDecomposition* decomp) {
  if (n_sites == 0) throw ConfigError("n_sites must be positive");
  return std::visit(
      [&](const auto& k) -> AmplitudeState {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SingleSite>) {
          if (k.site < 1 || k.site > n_sites) {
            throw ConfigError("site " + std::to_string(k.site) + " outside 1.." + std::to_string(n_sites));
          }
          std::vector<cplx> a(n_sites);
          a[k.site - 1] = 1.0;
          return normalized(std::move(a));
        } else if constexpr (std::is_same_v<K, BothEdges>) {
          std::vector<cplx> a(n_sites);
          if (n_sites == 1) {
            a[0] = 1.0;
          } else {
            a.front() = 1.0;
            a.back() = std::polar(1.0, k.phase);
          }
          return normalized(std::move(a));
        } else if constexpr (std::is_same_v<K, CustomAmplitudes>) {
          if (k.amplitudes.size() != n_sites) {
            throw ConfigError("custom amplitudes have " + std::to_string(k.amplitudes.size()) + " entries, expected " +
                              std::to_string(n_sites));
          }
          return normalized(k.amplitudes);
        } else {
          if (decomp == nullptr) throw ConfigError("mode quench requires a spectral decomposition");
          if (decomp->size() != n_sites) throw ConfigError("decomposition size does not match n_sites");
          return mode_quench(*decomp, k.selection);
        }
      },
      kind);
}

AmplitudePropagator::AmplitudePropagator(const PropagatorMatrix& m, const AmplitudeState& a0, Tolerances tol,
                                         const kernels::KernelTable& kernels)
    : m_(&m), kt_(&kernels), tol_(tol), n_(m.size()), t_(a0.time) {
  if (a0.size() != n_) {
    throw ConfigError("initial state has " + std::to_string(a0.size()) + " sites, matrix " + std::to_string(n_));
  }
  if (!(tol.rtol > 0.0) || !(tol.atol > 0.0)) throw ConfigError("integrator tolerances must be positive");
  const std::size_t len = 2 * n_;
  y_.resize(len);
  for (std::size_t i = 0; i < n_; ++i) {
    y_[i] = a0.amplitudes[i].real();
    y_[n_ + i] = a0.amplitudes[i].imag();
  }
  y_new_.resize(len);
  tmp_.resize(len);
  err_.resize(len);
  zero_.assign(len, 0.0);
  for (auto& k : k_) k.resize(len);

  double row_max = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < n_; ++c) row += std::abs(m(r, c));
    row_max = std::max(row_max, row);
  }
  h_ = std::min(0.1, 0.1 / std::max(row_max, 1e-300));
  rhs(y_.data(), k_[0].data());
}

void AmplitudePropagator::rhs(const double* y, double* dy) const {
  const auto re = m_->real_plane();
  const auto im = m_->imag_plane();
  kt_->cmatvec(n_, re.data(), im.data(), y, y + n_, dy, dy + n_);
}

void AmplitudePropagator::advance_to(double t_target) {
  if (t_target < t_) throw ConfigError("cannot integrate backwards in time");
  const std::size_t len = 2 * n_;
  const double* terms[6];
  double coeffs[7];
  while (t_ < t_target) {
    const double remaining = t_target - t_;
    if (remaining <= 1e-14 * std::max(1.0, std::abs(t_target))) {
      t_ = t_target;
      break;
    }
    const bool clamped = h_ >= remaining;
    const double h = clamped ? remaining : h_;
    if (h < 1e-14 * std::max(1.0, std::abs(t_))) throw NumericalError("step size underflow", t_);

    for (int s = 1; s < 7; ++s) {
      for (int j = 0; j < s; ++j) {
        coeffs[j] = h * kA[s][j];
        terms[j] = k_[static_cast<std::size_t>(j)].data();
      }
      double* dst = s == 6 ? y_new_.data() : tmp_.data();
      kt_->lincomb(len, dst, y_.data(), static_cast<std::size_t>(s), coeffs, terms);
      rhs(dst, k_[static_cast<std::size_t>(s)].data());
    }
    const double* all_terms[7];
    for (int j = 0; j < 7; ++j) {
      coeffs[j] = h * kE[j];
      all_terms[j] = k_[static_cast<std::size_t>(j)].data();
    }
    kt_->lincomb(len, err_.data(), zero_.data(), 7, coeffs, all_terms);
    const double err =
        std::sqrt(kt_->scaled_sq_error(len, err_.data(), y_.data(), y_new_.data(), tol_.atol, tol_.rtol) /
                  static_cast<double>(len));
    if (!std::isfinite(err)) throw NumericalError("non-finite amplitudes", t_);

    if (err <= 1.0) {
      y_.swap(y_new_);
      std::swap(k_[0], k_[6]);  // first-same-as-last
      t_ = clamped ? t_target : t_ + h;
      ++accepted_;
      const double factor =
          err == 0.0 ? kMaxFactor : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
      const double proposal = h * factor;
      h_ = clamped ? std::max(h_, proposal) : proposal;
    } else {
      ++rejected_;
      h_ = h * std::max(kMinFactor, kSafety * std::pow(err, -0.2));
    }
  }
}

std::vector<cplx> AmplitudePropagator::amplitudes() const {
  std::vector<cplx> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = cplx(y_[i], y_[n_ + i]);
  return out;
}

void AmplitudePropagator::populations(std::span<double> out) const {
  if (out.size() != n_) throw ConfigError("population buffer size mismatch");
  kt_->abs2(n_, y_.data(), y_.data() + n_, out.data());
}

std::vector<double> uniform_grid(double t_end, double dt_out) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be > 0");
  if (!(dt_out > 0.0) || !std::isfinite(dt_out)) throw ConfigError("dt_out must be > 0");
  const auto count = static_cast<std::size_t>(std::floor(t_end / dt_out * (1.0 + 1e-12)));
  std::vector<double> times(count + 1);
  for (std::size_t k = 0; k <= count; ++k) times[k] = static_cast<double>(k) * dt_out;
  return times;
}

Trajectory evolve_ode(const PropagatorMatrix& m, const AmplitudeState& a0, double t_end, double dt_out,
                      Tolerances tol) {
  Trajectory traj;
  traj.times = uniform_grid(t_end, dt_out);
  AmplitudeState start = a0;
  start.time = 0.0;
  AmplitudePropagator prop(m, start, tol);
  traj.states.reserve(traj.times.size());
  for (double t : traj.times) {
    prop.advance_to(t);
    traj.states.push_back(prop.amplitudes());
  }
  return traj;
}

Trajectory evolve_spectral(const SpectralDecomposition& decomp, const AmplitudeState& a0,
                           std::span<const double> times) {
  if (!(decomp.biorthogonality_residual <= kDefaultConditioningGate)) {
    throw ConditioningError("refusing spectral propagation", decomp.biorthogonality_residual);
  }
  const auto alpha = overlaps(decomp, a0);
  const auto n = static_cast<Eigen::Index>(decomp.size());
  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  Eigen::VectorXcd coeff(n);
  for (double t : times) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      coeff(k) = alpha[ku] * std::exp(cplx(0.0, -1.0) * decomp.eigenvalues[ku] * t);
    }
    const Eigen::VectorXcd psi = decomp.right * coeff;
    traj.states.emplace_back(psi.data(), psi.data() + psi.size());
  }
  return traj;
}

std::array<cplx, 4> analytic_s3_four_atom(std::span<const cplx, 4> a0, double xi, double gamma, double t) {
  const double decay = std::exp(-gamma * t / 2.0);
  const cplx hop = gamma * t * std::polar(1.0, -2.0 * xi);
  return {a0[0] * decay, (a0[1] - hop * a0[3]) * decay, (a0[2] - hop * a0[0]) * decay, a0[3] * decay};
}

}  // namespace swg

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

// Test-only reference routes. Nothing here calls into the integrator or the
// eigensolver wrapper under test.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace swg::oracle {

using cplx = std::complex<double>;

/// Generator assembled straight from the amplitude equations, one site pair at a time.
inline Eigen::MatrixXcd generator(const std::vector<double>& d, double xi, double eta, double beta = 1.0,
                                  double gamma = 1.0) {
  const auto n = static_cast<Eigen::Index>(d.size());
  const double gamma_ng = gamma * (1.0 - beta) / beta;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index mu = 0; mu < n; ++mu) {
    m(mu, mu) = -(gamma + gamma_ng) / 2.0;
    const double r_mu = gamma * (1.0 + eta * d[static_cast<std::size_t>(mu)]) / 2.0;
    const double l_mu = gamma * (1.0 - eta * d[static_cast<std::size_t>(mu)]) / 2.0;
    for (Eigen::Index nu = 0; nu < n; ++nu) {
      const double r_nu = gamma * (1.0 + eta * d[static_cast<std::size_t>(nu)]) / 2.0;
      const double l_nu = gamma * (1.0 - eta * d[static_cast<std::size_t>(nu)]) / 2.0;
      const double phase = -xi * static_cast<double>(std::abs(nu - mu));
      if (nu > mu) m(mu, nu) = -std::sqrt(l_mu * l_nu) * cplx(std::cos(phase), std::sin(phase));
      if (nu < mu) m(mu, nu) = -std::sqrt(r_mu * r_nu) * cplx(std::cos(phase), std::sin(phase));
    }
  }
  return m;
}

/// exp(M t) a0 through Eigen's Pade scaling-and-squaring.
inline Eigen::VectorXcd expm_apply(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& a0, double t) {
  const Eigen::MatrixXcd mt = m * t;
  return mt.exp() * a0;
}

/// Classical fixed-step RK4.
inline Eigen::VectorXcd rk4(const Eigen::MatrixXcd& m, Eigen::VectorXcd y, double t, int steps) {
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXcd k1 = m * y;
    const Eigen::VectorXcd k2 = m * (y + h / 2 * k1);
    const Eigen::VectorXcd k3 = m * (y + h / 2 * k2);
    const Eigen::VectorXcd k4 = m * (y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

inline std::vector<double> random_pattern(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> pick(-1, 1);
  std::vector<double> d(n);
  for (auto& v : d) v = pick(rng);
  return d;
}

inline std::vector<cplx> random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<cplx> a(n);
  double norm2 = 0.0;
  for (auto& v : a) {
    v = cplx(g(rng), g(rng));
    norm2 += std::norm(v);
  }
  for (auto& v : a) v /= std::sqrt(norm2);
  return a;
}

inline Eigen::VectorXcd to_eigen(const std::vector<cplx>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace swg::oracle

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

#include "swg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

#include "swg/error.hpp"

namespace swg {

namespace {

using Eigen::Index;

std::vector<std::size_t> spectral_order(const Eigen::VectorXcd& lambda, double tie) {
  std::vector<std::size_t> order(static_cast<std::size_t>(lambda.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto rate = [&](std::size_t i) { return -lambda(static_cast<Index>(i)).imag(); };
  const auto shift = [&](std::size_t i) { return lambda(static_cast<Index>(i)).real(); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rate(a) < rate(b); });
  // Runs of numerically equal rates are ordered by shift.
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && rate(order[end]) - rate(order[end - 1]) <= tie) ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return shift(a) < shift(b); });
    begin = end;
  }
  return order;
}

void check_selection(const SpectralDecomposition& decomp, const ModeSelection& selection) {
  std::set<std::size_t> seen;
  for (std::size_t idx : selection.indices) {
    if (idx >= decomp.size()) {
      throw ConfigError("mode index " + std::to_string(idx) + " out of range (" +
                        std::to_string(decomp.size()) + " modes)");
    }
    if (!seen.insert(idx).second) throw ConfigError("duplicate mode index " + std::to_string(idx));
  }
  if (!selection.weights.empty() && selection.weights.size() != selection.indices.size()) {
    throw ConfigError("mode weights must match mode indices");
  }
}

}  // namespace

SpectralDecomposition decompose(const PropagatorMatrix& m, double gate) {
  const Eigen::MatrixXcd h = cplx(0.0, 1.0) * m.dense();
  const Index n = h.rows();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, true);
  if (solver.info() != Eigen::Success) {
    throw ConditioningError("eigensolver did not converge", std::numeric_limits<double>::infinity());
  }

  // Diagonal of iM is -i(gamma + gamma_ng)/2; use it as the rate scale for ties.
  const double scale = n > 0 ? 2.0 * std::abs(h(0, 0)) : 1.0;
  const auto order = spectral_order(solver.eigenvalues(), SpectralDecomposition::kTieTolerance * scale);

  SpectralDecomposition out;
  out.eigenvalues.resize(order.size());
  out.right.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = static_cast<Index>(order[static_cast<std::size_t>(k)]);
    out.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(src);
    out.right.col(k) = solver.eigenvectors().col(src).normalized();
  }

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(out.right);
  const Eigen::MatrixXcd inverse = lu.inverse();
  out.left = inverse.adjoint();
  for (Index k = 0; k < n; ++k) {
    const cplx s = out.left.col(k).dot(out.right.col(k));  // conjugates the left factor
    out.left.col(k) /= std::conj(s);
  }

  out.condition_number = out.right.norm() * inverse.norm();

  // The Gram matrix of an inverse is close to I almost by construction, even
  // for a numerically defective R (uniform cascades at eta = 1 come back with
  // kappa ~ 1e15 and a Gram residual of 1e-16). Floor it with the forward
  // error bound of the inversion, u * kappa(R), so the gate actually fires.
  const Eigen::MatrixXcd gram = out.left.adjoint() * out.right;
  double residual = (gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  residual = std::max(residual, std::numeric_limits<double>::epsilon() * out.condition_number);
  if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
  out.biorthogonality_residual = residual;

  const double h_norm = h.norm();
  double eig_res = 0.0;
  for (Index k = 0; k < n; ++k) {
    const Eigen::VectorXcd r = h * out.right.col(k) - out.eigenvalues[static_cast<std::size_t>(k)] * out.right.col(k);
    eig_res = std::max(eig_res, r.norm() / h_norm);
  }
  out.eigen_residual = eig_res;

  if (!(residual <= gate)) {
    throw ConditioningError("eigendecomposition too close to an exceptional point", residual);
  }
  return out;
}

std::vector<cplx> overlaps(const SpectralDecomposition& decomp, const AmplitudeState& a0) {
  if (a0.size() != decomp.size()) {
    throw ConfigError("state has " + std::to_string(a0.size()) + " sites, decomposition " +
                      std::to_string(decomp.size()));
  }
  const Eigen::Map<const Eigen::VectorXcd> psi(a0.amplitudes.data(), static_cast<Index>(a0.size()));
  const Eigen::VectorXcd alpha = decomp.left.adjoint() * psi;
  return {alpha.data(), alpha.data() + alpha.size()};
}

AmplitudeState mode_quench(const SpectralDecomposition& decomp, const ModeSelection& selection) {
  check_selection(decomp, selection);
  if (selection.indices.empty()) throw ConfigError("mode quench needs at least one mode");
  const double equal = 1.0 / std::sqrt(static_cast<double>(selection.indices.size()));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Index>(decomp.size()));
  for (std::size_t k = 0; k < selection.indices.size(); ++k) {
    const cplx w = selection.weights.empty() ? cplx(equal) : selection.weights[k];
    psi += w * decomp.right.col(static_cast<Index>(selection.indices[k]));
  }
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ConfigError("mode superposition vanishes");
  psi /= norm;
  AmplitudeState state;
  state.amplitudes.assign(psi.data(), psi.data() + psi.size());
  return state;
}

std::string ModeLabel::to_string() const {
  std::string s = rate == RateClass::Dark ? "dark" : (rate == RateClass::Subradiant ? "subradiant" : "radiant");
  if (edge) s += "|edge";
  return s;
}

std::vector<ModeLabel> classify_modes(const SpectralDecomposition& decomp, const ModeThresholds& t) {
  const std::size_t n = decomp.size();
  const std::size_t cell = std::min(t.edge_sites, n);
  std::vector<ModeLabel> labels(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double g = decomp.decay_rate(k);
    auto& label = labels[k];
    label.rate = g < t.dark * t.gamma ? RateClass::Dark
                                      : (g < t.subradiant * t.gamma ? RateClass::Subradiant : RateClass::Radiant);
    const Eigen::VectorXd mass = decomp.right.col(static_cast<Index>(k)).cwiseAbs2();
    const double total = mass.sum();
    const double head = mass.head(static_cast<Index>(cell)).sum();
    const double tail = mass.tail(static_cast<Index>(cell)).sum();
    // too short to have a bulk: nothing counts as an edge mode
    label.edge = n > 2 * cell && total > 0.0 && std::max(head, tail) >= t.edge_mass * total;
  }
  return labels;
}

std::vector<double> beat_frequencies(const SpectralDecomposition& decomp, const ModeSelection& selection) {
  check_selection(decomp, selection);
  if (selection.indices.size() < 2) throw ConfigError("beat frequencies need at least two modes");
  std::vector<double> beats;
  for (std::size_t a = 0; a < selection.indices.size(); ++a) {
    for (std::size_t b = a + 1; b < selection.indices.size(); ++b) {
      beats.push_back(std::abs(decomp.shift(selection.indices[a]) - decomp.shift(selection.indices[b])));
    }
  }
  std::sort(beats.begin(), beats.end());
  return beats;
}

}  // namespace swg

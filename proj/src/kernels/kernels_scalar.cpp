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

#include <algorithm>
#include <cmath>

#include "swg/kernels.hpp"

namespace swg::kernels {
namespace {

void cmatvec_scalar(std::size_t n, const double* m_re, const double* m_im, const double* x_re,
                    const double* x_im, double* y_re, double* y_im) {
  for (std::size_t r = 0; r < n; ++r) {
    const double* ar = m_re + r * n;
    const double* ai = m_im + r * n;
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      acc_re += ar[c] * x_re[c] - ai[c] * x_im[c];
      acc_im += ar[c] * x_im[c] + ai[c] * x_re[c];
    }
    y_re[r] = acc_re;
    y_im[r] = acc_im;
  }
}

void lincomb_scalar(std::size_t len, double* out, const double* base, std::size_t n_terms,
                    const double* coeffs, const double* const* terms) {
  for (std::size_t i = 0; i < len; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k) acc += coeffs[k] * terms[k][i];
    out[i] = base[i] + acc;
  }
}

double scaled_sq_error_scalar(std::size_t len, const double* err, const double* a, const double* b,
                              double atol, double rtol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double scale = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    const double q = err[i] / scale;
    sum += q * q;
  }
  return sum;
}

void abs2_scalar(std::size_t n, const double* re, const double* im, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

constexpr KernelTable kScalar{Isa::Scalar, "scalar", cmatvec_scalar, lincomb_scalar,
                              scaled_sq_error_scalar, abs2_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace swg::kernels

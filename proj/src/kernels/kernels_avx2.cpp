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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "swg/kernels.hpp"

namespace swg::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void cmatvec_avx2(std::size_t n, const double* m_re, const double* m_im, const double* x_re,
                  const double* x_im, double* y_re, double* y_im) {
  const std::size_t n8 = n & ~std::size_t{7};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t r = 0; r < n; ++r) {
    const double* ar = m_re + r * n;
    const double* ai = m_im + r * n;
    __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
    __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c < n8; c += 8) {
      const __m256d mr0 = _mm256_loadu_pd(ar + c), mr1 = _mm256_loadu_pd(ar + c + 4);
      const __m256d mi0 = _mm256_loadu_pd(ai + c), mi1 = _mm256_loadu_pd(ai + c + 4);
      const __m256d xr0 = _mm256_loadu_pd(x_re + c), xr1 = _mm256_loadu_pd(x_re + c + 4);
      const __m256d xi0 = _mm256_loadu_pd(x_im + c), xi1 = _mm256_loadu_pd(x_im + c + 4);
      re0 = _mm256_fnmadd_pd(mi0, xi0, _mm256_fmadd_pd(mr0, xr0, re0));
      re1 = _mm256_fnmadd_pd(mi1, xi1, _mm256_fmadd_pd(mr1, xr1, re1));
      im0 = _mm256_fmadd_pd(mi0, xr0, _mm256_fmadd_pd(mr0, xi0, im0));
      im1 = _mm256_fmadd_pd(mi1, xr1, _mm256_fmadd_pd(mr1, xi1, im1));
    }
    for (; c < n4; c += 4) {
      const __m256d mr = _mm256_loadu_pd(ar + c), mi = _mm256_loadu_pd(ai + c);
      const __m256d xr = _mm256_loadu_pd(x_re + c), xi = _mm256_loadu_pd(x_im + c);
      re0 = _mm256_fnmadd_pd(mi, xi, _mm256_fmadd_pd(mr, xr, re0));
      im0 = _mm256_fmadd_pd(mi, xr, _mm256_fmadd_pd(mr, xi, im0));
    }
    double acc_re = hsum(_mm256_add_pd(re0, re1));
    double acc_im = hsum(_mm256_add_pd(im0, im1));
    for (; c < n; ++c) {
      acc_re += ar[c] * x_re[c] - ai[c] * x_im[c];
      acc_im += ar[c] * x_im[c] + ai[c] * x_re[c];
    }
    y_re[r] = acc_re;
    y_im[r] = acc_im;
  }
}

void lincomb_avx2(std::size_t len, double* out, const double* base, std::size_t n_terms,
                  const double* coeffs, const double* const* terms) {
  const std::size_t n4 = len & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_terms; ++k) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[k]), _mm256_loadu_pd(terms[k] + i), acc);
    }
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(base + i), acc));
  }
  for (; i < len; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k) acc += coeffs[k] * terms[k][i];
    out[i] = base[i] + acc;
  }
}

double scaled_sq_error_avx2(std::size_t len, const double* err, const double* a, const double* b,
                            double atol, double rtol) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d vatol = _mm256_set1_pd(atol);
  const __m256d vrtol = _mm256_set1_pd(rtol);
  const std::size_t n4 = len & ~std::size_t{3};
  __m256d sum = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d aa = _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i));
    const __m256d bb = _mm256_andnot_pd(sign, _mm256_loadu_pd(b + i));
    const __m256d scale = _mm256_fmadd_pd(vrtol, _mm256_max_pd(aa, bb), vatol);
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(err + i), scale);
    sum = _mm256_fmadd_pd(q, q, sum);
  }
  double total = hsum(sum);
  for (; i < len; ++i) {
    const double scale = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    const double q = err[i] / scale;
    total += q * q;
  }
  return total;
}

void abs2_avx2(std::size_t n, const double* re, const double* im, double* out) {
  const std::size_t n4 = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m)));
  }
  for (; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

}  // namespace

extern const KernelTable kAvx2Table;
const KernelTable kAvx2Table{Isa::Avx2, "avx2", cmatvec_avx2, lincomb_avx2, scaled_sq_error_avx2,
                             abs2_avx2};

}  // namespace swg::kernels

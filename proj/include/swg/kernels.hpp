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

// Inner loops of the amplitude integrator. Complex vectors are stored as
// split planes: re[0..n) followed by im[0..n), so every real-valued
// kernel sees a contiguous double array of length 2n.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The table is picked once per process from CPU
// features; SWG_SIMD=scalar forces the reference path.

#include <cstddef>
#include <string_view>

namespace swg::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;

  /// y = M x for a dense row-major n x n complex matrix in split planes.
  void (*cmatvec)(std::size_t n, const double* m_re, const double* m_im, const double* x_re,
                  const double* x_im, double* y_re, double* y_im);

  /// out[i] = base[i] + sum_k coeffs[k] * terms[k][i], i < len.
  void (*lincomb)(std::size_t len, double* out, const double* base, std::size_t n_terms,
                  const double* coeffs, const double* const* terms);

  /// sum_i (err[i] / (atol + rtol * max(|a[i]|, |b[i]|)))^2
  double (*scaled_sq_error)(std::size_t len, const double* err, const double* a, const double* b,
                            double atol, double rtol);

  /// out[i] = re[i]^2 + im[i]^2
  void (*abs2)(std::size_t n, const double* re, const double* im, double* out);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// Table selected for this process.
const KernelTable& active() noexcept;

}  // namespace swg::kernels

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

#include <cstdlib>
#include <string_view>

#include "swg/kernels.hpp"

namespace swg::kernels {

#if defined(SWG_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

const KernelTable* avx2_table() noexcept {
#if defined(SWG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* forced = std::getenv("SWG_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    const KernelTable* fast = avx2_table();
    return fast != nullptr ? *fast : scalar_table();
  }();
  return table;
}

}  // namespace swg::kernels

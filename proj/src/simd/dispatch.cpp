/*
 * Copyright 2026 The tretr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>
#include <string_view>

#include "tretr/simd/kernels.hpp"

namespace tretr::simd {

#if defined(TRETR_HAVE_AVX2)
const KernelTable* avx2_kernels_unchecked();
#endif
#if defined(TRETR_HAVE_NEON)
const KernelTable* neon_kernels_unchecked();
#endif

const KernelTable* avx2_kernels() {
#if defined(TRETR_HAVE_AVX2)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_kernels_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(TRETR_HAVE_NEON)
  return neon_kernels_unchecked();
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* k = avx2_kernels()) out.push_back(k);
  if (const auto* k = neon_kernels()) out.push_back(k);
  return out;
}

namespace {

const KernelTable& select_kernels() {
  const char* env = std::getenv("TRETR_SIMD");
  const std::string_view wanted = env ? env : "";
  if (wanted == "scalar") return scalar_kernels();
  if (wanted == "avx2") {
    const auto* k = avx2_kernels();
    return k ? *k : scalar_kernels();
  }
  if (wanted == "neon") {
    const auto* k = neon_kernels();
    return k ? *k : scalar_kernels();
  }
  if (const auto* k = avx2_kernels()) return *k;
  if (const auto* k = neon_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

}  // namespace tretr::simd

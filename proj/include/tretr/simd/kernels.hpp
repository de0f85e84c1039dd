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

// Arithmetic inner loops behind K-means and the Gini coefficient.
//
// Each kernel has a scalar reference implementation and optional AVX2 (x86-64)
// and NEON (aarch64) variants. The variant is chosen once per process from the
// CPU's capabilities; setting TRETR_SIMD=scalar|avx2|neon overrides the choice
// (an unavailable variant falls back to scalar). Variants may differ from the
// reference by summation order only.

#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tretr::simd {

struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  /// sum_j values[j] * dense[indices[j]]
  double (*sparse_dot)(const std::uint32_t* indices, const double* values,
                       std::size_t nnz, const double* dense);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  /// sum_i (i + 1) * x[i]
  double (*rank_weighted_sum)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();
/// The table every library routine dispatches through.
const KernelTable& active_kernels();
/// Every variant usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  assert(a.size() == b.size());
  return active_kernels().squared_distance(a.data(), b.data(), a.size());
}

inline double sparse_dot(std::span<const std::uint32_t> indices,
                         std::span<const double> values,
                         std::span<const double> dense) {
  assert(indices.size() == values.size());
  return active_kernels().sparse_dot(indices.data(), values.data(),
                                     indices.size(), dense.data());
}

inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  assert(x.size() == y.size());
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum(std::span<const double> x) {
  return active_kernels().sum(x.data(), x.size());
}

inline double rank_weighted_sum(std::span<const double> x) {
  return active_kernels().rank_weighted_sum(x.data(), x.size());
}

}  // namespace tretr::simd

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

// NEON kernels for aarch64, where Advanced SIMD with float64 lanes is
// architecturally guaranteed.

#include <arm_neon.h>

#include "tretr/simd/kernels.hpp"

namespace tretr::simd {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance_neon(const double* a, const double* b,
                             std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 =
        vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vfmaq_f64(acc0, d0, d0);
    acc1 = vfmaq_f64(acc1, d1, d1);
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// No gather instruction; pairs are assembled lane by lane.
double sparse_dot_neon(const std::uint32_t* indices, const double* values,
                       std::size_t nnz, const double* dense) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= nnz; j += 2) {
    float64x2_t g = vdupq_n_f64(dense[indices[j]]);
    g = vsetq_lane_f64(dense[indices[j + 1]], g, 1);
    acc = vfmaq_f64(acc, vld1q_f64(values + j), g);
  }
  double total = vaddvq_f64(acc);
  for (; j < nnz; ++j) total += values[j] * dense[indices[j]];
  return total;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double rank_weighted_sum_neon(const double* x, std::size_t n) {
  const double init[2] = {1.0, 2.0};
  float64x2_t weights = vld1q_f64(init);
  const float64x2_t step = vdupq_n_f64(2.0);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, weights, vld1q_f64(x + i));
    weights = vaddq_f64(weights, step);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += static_cast<double>(i + 1) * x[i];
  return total;
}

constexpr KernelTable kNeon{
    "neon",    dot_neon, squared_distance_neon,  sparse_dot_neon,
    axpy_neon, sum_neon, rank_weighted_sum_neon,
};

}  // namespace

const KernelTable* neon_kernels_unchecked() { return &kNeon; }

}  // namespace tretr::simd

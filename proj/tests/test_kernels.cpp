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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>

#include "tretr/simd/kernels.hpp"

namespace tretr::simd {
namespace {

// Every variant against the scalar reference. Variants may reorder sums, so
// the bound scales with the magnitude of the summands.

class KernelEquivalence : public ::testing::TestWithParam<const KernelTable*> {
 protected:
  const KernelTable& ref = scalar_kernels();
  const KernelTable& alt = *GetParam();
  std::mt19937_64 rng{17};

  std::vector<double> random_vec(std::size_t n) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
  }
};

double bound(double magnitude) { return 1e-14 * (1.0 + magnitude); }

TEST_P(KernelEquivalence, DotAndDistance) {
  for (std::size_t n = 0; n < 70; ++n) {
    const auto a = random_vec(n);
    const auto b = random_vec(n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::fabs(a[i] * b[i]);
    EXPECT_NEAR(alt.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n),
                bound(mag))
        << "n=" << n;
    const double d = ref.squared_distance(a.data(), b.data(), n);
    EXPECT_NEAR(alt.squared_distance(a.data(), b.data(), n), d, bound(d));
  }
}

TEST_P(KernelEquivalence, SparseDot) {
  const auto dense = random_vec(500);
  for (std::size_t nnz = 0; nnz < 40; ++nnz) {
    std::vector<std::uint32_t> idx(500);
    std::iota(idx.begin(), idx.end(), 0U);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(nnz);
    std::sort(idx.begin(), idx.end());
    const auto vals = random_vec(nnz);
    double mag = 0.0;
    for (std::size_t j = 0; j < nnz; ++j) mag += std::fabs(vals[j] * dense[idx[j]]);
    EXPECT_NEAR(alt.sparse_dot(idx.data(), vals.data(), nnz, dense.data()),
                ref.sparse_dot(idx.data(), vals.data(), nnz, dense.data()),
                bound(mag));
  }
}

TEST_P(KernelEquivalence, Axpy) {
  for (std::size_t n = 0; n < 40; ++n) {
    const auto x = random_vec(n);
    auto y1 = random_vec(n);
    auto y2 = y1;
    ref.axpy(0.37, x.data(), y1.data(), n);
    alt.axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y2[i], y1[i], bound(std::fabs(y1[i])));
  }
}

TEST_P(KernelEquivalence, SumAndRankWeightedSum) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (std::size_t n = 0; n < 300; n += 7) {
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    const double s = ref.sum(x.data(), n);
    EXPECT_NEAR(alt.sum(x.data(), n), s, bound(s));
    const double w = ref.rank_weighted_sum(x.data(), n);
    EXPECT_NEAR(alt.rank_weighted_sum(x.data(), n), w, bound(w));
  }
}

TEST_P(KernelEquivalence, SmallIntegersAreExact) {
  // Every partial sum is an exactly representable integer, so any order
  // gives the same answer.
  for (std::size_t n = 0; n < 50; ++n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(rng() % 9);
    EXPECT_EQ(alt.sum(x.data(), n), ref.sum(x.data(), n));
    EXPECT_EQ(alt.rank_weighted_sum(x.data(), n),
              ref.rank_weighted_sum(x.data(), n));
    EXPECT_EQ(alt.dot(x.data(), x.data(), n), ref.dot(x.data(), x.data(), n));
  }
}

std::string variant_name(
    const ::testing::TestParamInfo<const KernelTable*>& info) {
  return info.param->name;
}

INSTANTIATE_TEST_SUITE_P(Available, KernelEquivalence,
                         ::testing::ValuesIn(available_kernels()),
                         variant_name);

TEST(Dispatch, ScalarIsAlwaysAvailable) {
  const auto all = available_kernels();
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(std::string(all.front()->name), "scalar");
}

TEST(Dispatch, ChoosesBestVariantUnlessOverridden) {
  const char* env = std::getenv("TRETR_SIMD");
  const std::string active = active_kernels().name;
  if (env == nullptr || *env == '\0') {
    // Without an override the widest available variant wins.
    EXPECT_EQ(active, std::string(available_kernels().back()->name));
  } else if (std::string(env) == "scalar") {
    EXPECT_EQ(active, "scalar");
  } else {
    EXPECT_TRUE(active == env || active == "scalar");
  }
}

TEST(Dispatch, SpanWrappersUseActiveTable) {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{4.0, 5.0, 6.0};
  EXPECT_EQ(dot(a, b), 32.0);
  EXPECT_EQ(squared_distance(a, b), 27.0);
  EXPECT_EQ(sum(a), 6.0);
  EXPECT_EQ(rank_weighted_sum(a), 14.0);
}

}  // namespace
}  // namespace tretr::simd

// Copyright 2026 The RAS Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ras/simd/kernels.hpp"

#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace ras::simd {
namespace {

template <typename T>
std::vector<T> Random(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(dist(gen));
  return v;
}

template <typename T>
class KernelEquivalenceTest : public ::testing::Test {
 protected:
  // Reassociation differences only; scaled by the reduction length.
  static double Tol(std::size_t k) {
    return (sizeof(T) == 4 ? 2e-6 : 1e-14) * static_cast<double>(k + 1);
  }
};

using Precisions = ::testing::Types<float, double>;
TYPED_TEST_SUITE(KernelEquivalenceTest, Precisions);

TYPED_TEST(KernelEquivalenceTest, DotMatchesScalar) {
  using T = TypeParam;
  const KernelTable<T>* vec = Avx2Kernels<T>();
  if (vec == nullptr) GTEST_SKIP() << "no AVX2 on this host";
  std::mt19937_64 gen(7);
  for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 9u, 31u, 32u, 33u, 100u, 257u}) {
    auto a = Random<T>(n, gen), b = Random<T>(n, gen);
    const double ref = ScalarKernels<T>().dot(a.data(), b.data(), n);
    const double got = vec->dot(a.data(), b.data(), n);
    EXPECT_NEAR(got, ref, this->Tol(n)) << "n=" << n;
  }
}

TYPED_TEST(KernelEquivalenceTest, AxpyMatchesScalar) {
  using T = TypeParam;
  const KernelTable<T>* vec = Avx2Kernels<T>();
  if (vec == nullptr) GTEST_SKIP() << "no AVX2 on this host";
  std::mt19937_64 gen(8);
  for (std::size_t n : {0u, 1u, 5u, 8u, 13u, 64u, 71u}) {
    auto x = Random<T>(n, gen), y = Random<T>(n, gen);
    auto y_ref = y;
    ScalarKernels<T>().axpy(T(0.37), x.data(), y_ref.data(), n);
    vec->axpy(T(0.37), x.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y[i], y_ref[i], this->Tol(1));
  }
}

TYPED_TEST(KernelEquivalenceTest, GemmMatchesScalarOnRaggedShapes) {
  using T = TypeParam;
  const KernelTable<T>* vec = Avx2Kernels<T>();
  if (vec == nullptr) GTEST_SKIP() << "no AVX2 on this host";
  std::mt19937_64 gen(9);
  const std::size_t dims[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 33, 64};
  for (std::size_t m : dims) {
    for (std::size_t n : dims) {
      for (std::size_t k : {1u, 4u, 17u, 32u}) {
        auto a = Random<T>(m * k, gen), b = Random<T>(k * n, gen);
        auto c = Random<T>(m * n, gen);
        auto c_ref = c;
        ScalarKernels<T>().gemm(m, n, k, a.data(), k, b.data(), n, c_ref.data(), n);
        vec->gemm(m, n, k, a.data(), k, b.data(), n, c.data(), n);
        for (std::size_t i = 0; i < m * n; ++i) {
          ASSERT_NEAR(c[i], c_ref[i], this->Tol(k))
              << "m=" << m << " n=" << n << " k=" << k << " i=" << i;
        }
      }
    }
  }
}

TYPED_TEST(KernelEquivalenceTest, GemmHonoursLeadingDimensions) {
  using T = TypeParam;
  std::mt19937_64 gen(10);
  // Multiply the top-left 3x5 block of a 3x8 buffer by a 5x6 block of a 5x9.
  auto a = Random<T>(3 * 8, gen), b = Random<T>(5 * 9, gen);
  std::vector<T> expected(3 * 10, T{0});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t p = 0; p < 5; ++p)
        expected[i * 10 + j] += a[i * 8 + p] * b[p * 9 + j];
  std::vector<const KernelTable<T>*> tables{&ScalarKernels<T>()};
  if (Avx2Kernels<T>()) tables.push_back(Avx2Kernels<T>());
  for (const auto* table : tables) {
    std::vector<T> c(3 * 10, T{0});
    table->gemm(3, 6, 5, a.data(), 8, b.data(), 9, c.data(), 10);
    for (std::size_t i = 0; i < c.size(); ++i)
      EXPECT_NEAR(c[i], expected[i], this->Tol(5)) << table->name;
  }
}

TEST(KernelDispatchTest, ActiveTableIsOneOfTheKnownOnes) {
  const auto& active = ActiveKernels<float>();
  EXPECT_TRUE(active.name == "scalar" || active.name == "avx2");
  if (CpuHasAvx2() && active.name == "scalar") {
    // Only legitimate when forced through the environment.
    const char* env = std::getenv("RAS_SIMD");
    ASSERT_NE(env, nullptr);
  }
}

}  // namespace
}  // namespace ras::simd

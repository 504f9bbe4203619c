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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "ras/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace ras::simd {
namespace {

struct F32x8 {
  using Reg = __m256;
  using Scalar = float;
  static constexpr std::size_t kLanes = 8;
  static Reg Zero() { return _mm256_setzero_ps(); }
  static Reg Set1(float v) { return _mm256_set1_ps(v); }
  static Reg Load(const float* p) { return _mm256_loadu_ps(p); }
  static void Store(float* p, Reg v) { _mm256_storeu_ps(p, v); }
  static Reg Fma(Reg a, Reg b, Reg c) { return _mm256_fmadd_ps(a, b, c); }
  static Reg Add(Reg a, Reg b) { return _mm256_add_ps(a, b); }
  static float Sum(Reg v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 shuf = _mm_movehdup_ps(lo);
    __m128 sums = _mm_add_ps(lo, shuf);
    shuf = _mm_movehl_ps(shuf, sums);
    sums = _mm_add_ss(sums, shuf);
    return _mm_cvtss_f32(sums);
  }
};

struct F64x4 {
  using Reg = __m256d;
  using Scalar = double;
  static constexpr std::size_t kLanes = 4;
  static Reg Zero() { return _mm256_setzero_pd(); }
  static Reg Set1(double v) { return _mm256_set1_pd(v); }
  static Reg Load(const double* p) { return _mm256_loadu_pd(p); }
  static void Store(double* p, Reg v) { _mm256_storeu_pd(p, v); }
  static Reg Fma(Reg a, Reg b, Reg c) { return _mm256_fmadd_pd(a, b, c); }
  static Reg Add(Reg a, Reg b) { return _mm256_add_pd(a, b); }
  static double Sum(Reg v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d high64 = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, high64));
  }
};

template <typename V>
typename V::Scalar DotAvx2(const typename V::Scalar* a,
                           const typename V::Scalar* b, std::size_t n) {
  constexpr std::size_t L = V::kLanes;
  auto acc0 = V::Zero(), acc1 = V::Zero(), acc2 = V::Zero(), acc3 = V::Zero();
  std::size_t i = 0;
  for (; i + 4 * L <= n; i += 4 * L) {
    acc0 = V::Fma(V::Load(a + i), V::Load(b + i), acc0);
    acc1 = V::Fma(V::Load(a + i + L), V::Load(b + i + L), acc1);
    acc2 = V::Fma(V::Load(a + i + 2 * L), V::Load(b + i + 2 * L), acc2);
    acc3 = V::Fma(V::Load(a + i + 3 * L), V::Load(b + i + 3 * L), acc3);
  }
  for (; i + L <= n; i += L) acc0 = V::Fma(V::Load(a + i), V::Load(b + i), acc0);
  auto total = V::Sum(V::Add(V::Add(acc0, acc1), V::Add(acc2, acc3)));
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

template <typename V>
void AxpyAvx2(typename V::Scalar alpha, const typename V::Scalar* x,
              typename V::Scalar* y, std::size_t n) {
  constexpr std::size_t L = V::kLanes;
  const auto va = V::Set1(alpha);
  std::size_t i = 0;
  for (; i + L <= n; i += L) V::Store(y + i, V::Fma(va, V::Load(x + i), V::Load(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// 4-row x 2-vector register tile; leftover rows and columns fall through to
// narrower tiles and finally a scalar loop.
template <typename V>
void GemmAvx2(std::size_t m, std::size_t n, std::size_t k,
              const typename V::Scalar* a, std::size_t lda,
              const typename V::Scalar* b, std::size_t ldb,
              typename V::Scalar* c, std::size_t ldc) {
  using S = typename V::Scalar;
  constexpr std::size_t L = V::kLanes;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const S* a0 = a + i * lda;
    const S* a1 = a0 + lda;
    const S* a2 = a1 + lda;
    const S* a3 = a2 + lda;
    S* c0 = c + i * ldc;
    S* c1 = c0 + ldc;
    S* c2 = c1 + ldc;
    S* c3 = c2 + ldc;
    std::size_t j = 0;
    for (; j + 2 * L <= n; j += 2 * L) {
      auto r00 = V::Load(c0 + j), r01 = V::Load(c0 + j + L);
      auto r10 = V::Load(c1 + j), r11 = V::Load(c1 + j + L);
      auto r20 = V::Load(c2 + j), r21 = V::Load(c2 + j + L);
      auto r30 = V::Load(c3 + j), r31 = V::Load(c3 + j + L);
      for (std::size_t p = 0; p < k; ++p) {
        const S* brow = b + p * ldb + j;
        const auto b0 = V::Load(brow);
        const auto b1 = V::Load(brow + L);
        auto av = V::Set1(a0[p]);
        r00 = V::Fma(av, b0, r00);
        r01 = V::Fma(av, b1, r01);
        av = V::Set1(a1[p]);
        r10 = V::Fma(av, b0, r10);
        r11 = V::Fma(av, b1, r11);
        av = V::Set1(a2[p]);
        r20 = V::Fma(av, b0, r20);
        r21 = V::Fma(av, b1, r21);
        av = V::Set1(a3[p]);
        r30 = V::Fma(av, b0, r30);
        r31 = V::Fma(av, b1, r31);
      }
      V::Store(c0 + j, r00);
      V::Store(c0 + j + L, r01);
      V::Store(c1 + j, r10);
      V::Store(c1 + j + L, r11);
      V::Store(c2 + j, r20);
      V::Store(c2 + j + L, r21);
      V::Store(c3 + j, r30);
      V::Store(c3 + j + L, r31);
    }
    for (; j + L <= n; j += L) {
      auto r0 = V::Load(c0 + j), r1 = V::Load(c1 + j);
      auto r2 = V::Load(c2 + j), r3 = V::Load(c3 + j);
      for (std::size_t p = 0; p < k; ++p) {
        const auto bv = V::Load(b + p * ldb + j);
        r0 = V::Fma(V::Set1(a0[p]), bv, r0);
        r1 = V::Fma(V::Set1(a1[p]), bv, r1);
        r2 = V::Fma(V::Set1(a2[p]), bv, r2);
        r3 = V::Fma(V::Set1(a3[p]), bv, r3);
      }
      V::Store(c0 + j, r0);
      V::Store(c1 + j, r1);
      V::Store(c2 + j, r2);
      V::Store(c3 + j, r3);
    }
    for (; j < n; ++j) {
      S s0 = c0[j], s1 = c1[j], s2 = c2[j], s3 = c3[j];
      for (std::size_t p = 0; p < k; ++p) {
        const S bv = b[p * ldb + j];
        s0 += a0[p] * bv;
        s1 += a1[p] * bv;
        s2 += a2[p] * bv;
        s3 += a3[p] * bv;
      }
      c0[j] = s0;
      c1[j] = s1;
      c2[j] = s2;
      c3[j] = s3;
    }
  }
  for (; i < m; ++i) {
    const S* arow = a + i * lda;
    S* crow = c + i * ldc;
    for (std::size_t p = 0; p < k; ++p) AxpyAvx2<V>(arow[p], b + p * ldb, crow, n);
  }
}

}  // namespace

template <>
const KernelTable<float>* Avx2Kernels<float>() {
  static const KernelTable<float> table{"avx2", &DotAvx2<F32x8>,
                                        &AxpyAvx2<F32x8>, &GemmAvx2<F32x8>};
  return CpuHasAvx2() ? &table : nullptr;
}

template <>
const KernelTable<double>* Avx2Kernels<double>() {
  static const KernelTable<double> table{"avx2", &DotAvx2<F64x4>,
                                         &AxpyAvx2<F64x4>, &GemmAvx2<F64x4>};
  return CpuHasAvx2() ? &table : nullptr;
}

}  // namespace ras::simd

#else  // no AVX2 toolchain support for this target

namespace ras::simd {
template <>
const KernelTable<float>* Avx2Kernels<float>() { return nullptr; }
template <>
const KernelTable<double>* Avx2Kernels<double>() { return nullptr; }
}  // namespace ras::simd

#endif

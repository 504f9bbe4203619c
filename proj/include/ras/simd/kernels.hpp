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

#ifndef RAS_SIMD_KERNELS_HPP_
#define RAS_SIMD_KERNELS_HPP_

#include <cstddef>
#include <string_view>

namespace ras::simd {

// The data-parallel inner loops of the tensor engine. Every entry has a
// scalar reference implementation; vector variants must agree with it up to
// floating-point reassociation.
template <typename T>
struct KernelTable {
  std::string_view name;
  T (*dot)(const T* a, const T* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(T alpha, const T* x, T* y, std::size_t n);
  // C[m x n] += A[m x k] * B[k x n]; row-major with leading dimensions.
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const T* a,
               std::size_t lda, const T* b, std::size_t ldb, T* c,
               std::size_t ldc);
};

template <typename T>
const KernelTable<T>& ScalarKernels();

// nullptr when the build has no AVX2 path or the CPU lacks AVX2+FMA.
template <typename T>
const KernelTable<T>* Avx2Kernels();

// Chosen once per process: AVX2 when available, scalar otherwise. The
// environment variable RAS_SIMD=scalar forces the reference kernels.
template <typename T>
const KernelTable<T>& ActiveKernels();

bool CpuHasAvx2();

}  // namespace ras::simd

#endif  // RAS_SIMD_KERNELS_HPP_

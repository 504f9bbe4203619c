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

#include "ras/linalg.hpp"

#include "ras/simd/kernels.hpp"

namespace ras {

template <typename T>
void GemmAccumulate(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k || out.rows() != m || out.cols() != n) {
    throw ShapeError("gemm shape mismatch");
  }
  if (m == 0 || n == 0 || k == 0) return;
  simd::ActiveKernels<T>().gemm(m, n, k, a.data(), k, b.data(), n, out.data(),
                                n);
}

template <typename T>
void GemmNTAccumulate(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out) {
  GemmAccumulate(a, Transposed(b), out);
}

template <typename T>
void GemmTNAccumulate(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out) {
  GemmAccumulate(Transposed(a), b, out);
}

#define RAS_INSTANTIATE(T)                                                  \
  template void GemmAccumulate<T>(const Tensor<T>&, const Tensor<T>&,       \
                                  Tensor<T>&);                              \
  template void GemmNTAccumulate<T>(const Tensor<T>&, const Tensor<T>&,     \
                                    Tensor<T>&);                            \
  template void GemmTNAccumulate<T>(const Tensor<T>&, const Tensor<T>&,     \
                                    Tensor<T>&);
RAS_INSTANTIATE(float)
RAS_INSTANTIATE(double)
#undef RAS_INSTANTIATE

}  // namespace ras

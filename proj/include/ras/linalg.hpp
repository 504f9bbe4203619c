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

#ifndef RAS_LINALG_HPP_
#define RAS_LINALG_HPP_

#include "ras/tensor.hpp"

namespace ras {

// Matrix products over the active SIMD kernel table. Each accumulates into
// `out`, which must already have the result shape.
template <typename T>
void GemmAccumulate(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out);
// out += a * b^T
template <typename T>
void GemmNTAccumulate(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out);
// out += a^T * b
template <typename T>
void GemmTNAccumulate(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out);

template <typename T>
Tensor<T> MatMul(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows()) {
    throw ShapeError("matmul " + ShapeString(a.shape()) + " x " +
                     ShapeString(b.shape()));
  }
  Tensor<T> out({a.rows(), b.cols()});
  GemmAccumulate(a, b, out);
  return out;
}

}  // namespace ras

#endif  // RAS_LINALG_HPP_

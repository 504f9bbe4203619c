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

#include <cstdlib>
#include <string_view>

#include "ras/simd/kernels.hpp"

namespace ras::simd {

bool CpuHasAvx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = __builtin_cpu_supports("avx2") &&
                          __builtin_cpu_supports("fma");
  return has;
#else
  return false;
#endif
}

namespace {

bool ForceScalar() {
  const char* env = std::getenv("RAS_SIMD");
  return env != nullptr && std::string_view(env) == "scalar";
}

}  // namespace

template <typename T>
const KernelTable<T>& ActiveKernels() {
  static const KernelTable<T>& table = [] () -> const KernelTable<T>& {
    if (!ForceScalar()) {
      if (const KernelTable<T>* vec = Avx2Kernels<T>()) return *vec;
    }
    return ScalarKernels<T>();
  }();
  return table;
}

template const KernelTable<float>& ActiveKernels<float>();
template const KernelTable<double>& ActiveKernels<double>();

}  // namespace ras::simd

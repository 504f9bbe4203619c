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

#ifndef RAS_TESTS_TEST_UTIL_HPP_
#define RAS_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "ras/autodiff.hpp"
#include "ras/tensor.hpp"

namespace ras::testing {

template <typename T>
Tensor<T> RandomTensor(const Shape& shape, std::mt19937_64& gen,
                       double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Tensor<T> t(shape);
  for (auto& v : t.storage()) v = static_cast<T>(dist(gen));
  return t;
}

// Central finite differences of a scalar function of `x`, perturbing x in
// place. Independent of the tape: `f` recomputes from scratch.
inline Tensor<double> FiniteDifference(Tensor<double>& x,
                                       const std::function<double()>& f,
                                       double h) {
  Tensor<double> grad(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f();
    x[i] = saved - h;
    const double down = f();
    x[i] = saved;
    grad[i] = (up - down) / (2 * h);
  }
  return grad;
}

// |analytic - numeric| / max(1, |numeric|), maximised over elements.
inline double MaxGradError(const Tensor<double>& analytic,
                           const Tensor<double>& numeric) {
  double worst = 0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double err = std::abs(analytic[i] - numeric[i]) /
                       std::max(1.0, std::abs(numeric[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

inline ::testing::AssertionResult TensorNear(const Tensor<double>& a,
                                             const Tensor<double>& b,
                                             double tol) {
  if (a.shape() != b.shape()) {
    return ::testing::AssertionFailure()
           << "shape " << ShapeString(a.shape()) << " vs "
           << ShapeString(b.shape());
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) <= tol)) {
      return ::testing::AssertionFailure()
             << "element " << i << ": " << a[i] << " vs " << b[i];
    }
  }
  return ::testing::AssertionSuccess();
}

// Worst relative error between tape gradients and central differences over
// every scalar of the given parameters. `loss` builds the scalar loss on a
// fresh tape bound to `params`.
inline double ParamGradientError(
    ParamSet<double>& params, const std::vector<ParamId>& ids,
    const std::function<Var<double>(Tape<double>&)>& loss, double h,
    std::string* worst_name = nullptr) {
  Gradients<double> grads(params.size());
  {
    Tape<double> tape(&params);
    tape.Backward(loss(tape), &grads);
  }
  auto value = [&]() {
    Tape<double> tape(&params, false);
    return loss(tape).value()[0];
  };
  double worst = 0;
  for (ParamId id : ids) {
    Tensor<double> numeric = FiniteDifference(params[id].value, value, h);
    Tensor<double> analytic = grads.touched[id] ? grads.grads[id]
                                                : Tensor<double>(numeric.shape());
    const double err = MaxGradError(analytic, numeric);
    if (err > worst) {
      worst = err;
      if (worst_name) *worst_name = params[id].name;
    }
  }
  return worst;
}

}  // namespace ras::testing

#endif  // RAS_TESTS_TEST_UTIL_HPP_

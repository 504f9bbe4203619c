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

#ifndef RAS_NN_HPP_
#define RAS_NN_HPP_

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ras/autodiff.hpp"

namespace ras {

using Rng = std::mt19937_64;

inline constexpr double kLayerNormEps = 1e-5;

// y = x W^T + b for token-major x[L x in]; weight is [out x in].
struct Linear {
  ParamId weight = 0;
  std::optional<ParamId> bias;
  std::size_t in = 0;
  std::size_t out = 0;
};

struct LayerNormParams {
  ParamId gamma = 0;
  ParamId beta = 0;
};

// Post-LN transformer layer:
//   y1  = LN1(x_q + MHSA(x_q, x_k, x_v))
//   out = LN2(y1 + FFN(y1)),  FFN = Linear -> ReLU -> Linear
struct TransformerLayer {
  Linear q_proj, k_proj, v_proj, out_proj;
  Linear ffn_in, ffn_out;
  LayerNormParams ln1, ln2;
  std::size_t dim = 0;
  std::size_t num_heads = 1;
};

// Xavier-uniform weight, zero bias.
template <typename T>
Linear MakeLinear(ParamSet<T>& params, const std::string& name, std::size_t in,
                  std::size_t out, bool with_bias, Rng& rng);

template <typename T>
LayerNormParams MakeLayerNorm(ParamSet<T>& params, const std::string& name,
                              std::size_t dim);

// Throws ConfigError unless dim is a positive multiple of num_heads.
template <typename T>
TransformerLayer MakeTransformerLayer(ParamSet<T>& params,
                                      const std::string& name, std::size_t dim,
                                      std::size_t num_heads,
                                      std::size_t ffn_mult, Rng& rng);

template <typename T>
Var<T> ApplyLinear(Tape<T>& tape, const Linear& layer, Var<T> x);

template <typename T>
Var<T> ApplyLayerNorm(Tape<T>& tape, const LayerNormParams& ln, Var<T> x);

// Scaled dot-product attention per head with scale 1/sqrt(dim/heads), heads
// concatenated and passed through out_proj. When `attention` is non-null it
// receives each head's [L_q x L_k] weight matrix.
template <typename T>
Var<T> MultiHeadAttention(Tape<T>& tape, const TransformerLayer& layer,
                          Var<T> x_q, Var<T> x_k, Var<T> x_v,
                          std::vector<Tensor<T>>* attention = nullptr);

template <typename T>
Var<T> ApplyTransformer(Tape<T>& tape, const TransformerLayer& layer,
                        Var<T> x_q, Var<T> x_k, Var<T> x_v);

// Every ParamId a layer owns, for bookkeeping and tests.
std::vector<ParamId> LayerParamIds(const TransformerLayer& layer);
std::vector<ParamId> LayerParamIds(const Linear& layer);

}  // namespace ras

#endif  // RAS_NN_HPP_

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

#include "ras/nn.hpp"

#include <cmath>

namespace ras {

template <typename T>
Linear MakeLinear(ParamSet<T>& params, const std::string& name, std::size_t in,
                  std::size_t out, bool with_bias, Rng& rng) {
  if (in == 0 || out == 0) throw ConfigError("linear layer " + name + " has a zero extent");
  const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor<T> w({out, in});
  for (auto& v : w.storage()) v = static_cast<T>(dist(rng));
  Linear layer;
  layer.in = in;
  layer.out = out;
  layer.weight = params.Add(name + ".weight", std::move(w));
  if (with_bias) layer.bias = params.Add(name + ".bias", Tensor<T>({out}));
  return layer;
}

template <typename T>
LayerNormParams MakeLayerNorm(ParamSet<T>& params, const std::string& name,
                              std::size_t dim) {
  LayerNormParams ln;
  ln.gamma = params.Add(name + ".gamma", Tensor<T>({dim}, T{1}));
  ln.beta = params.Add(name + ".beta", Tensor<T>({dim}));
  return ln;
}

template <typename T>
TransformerLayer MakeTransformerLayer(ParamSet<T>& params,
                                      const std::string& name, std::size_t dim,
                                      std::size_t num_heads,
                                      std::size_t ffn_mult, Rng& rng) {
  if (num_heads == 0 || dim == 0 || dim % num_heads != 0) {
    throw ConfigError("model dim " + std::to_string(dim) +
                      " is not divisible by " + std::to_string(num_heads) +
                      " heads");
  }
  if (ffn_mult == 0) throw ConfigError("ffn multiplier must be positive");
  TransformerLayer layer;
  layer.dim = dim;
  layer.num_heads = num_heads;
  layer.q_proj = MakeLinear(params, name + ".q_proj", dim, dim, true, rng);
  layer.k_proj = MakeLinear(params, name + ".k_proj", dim, dim, true, rng);
  layer.v_proj = MakeLinear(params, name + ".v_proj", dim, dim, true, rng);
  layer.out_proj = MakeLinear(params, name + ".out_proj", dim, dim, true, rng);
  layer.ffn_in = MakeLinear(params, name + ".ffn_in", dim, dim * ffn_mult, true, rng);
  layer.ffn_out = MakeLinear(params, name + ".ffn_out", dim * ffn_mult, dim, true, rng);
  layer.ln1 = MakeLayerNorm(params, name + ".ln1", dim);
  layer.ln2 = MakeLayerNorm(params, name + ".ln2", dim);
  return layer;
}

template <typename T>
Var<T> ApplyLinear(Tape<T>& tape, const Linear& layer, Var<T> x) {
  if (x.value().rank() != 2 || x.cols() != layer.in) {
    throw ShapeError("linear expects [L x " + std::to_string(layer.in) +
                     "], got " + ShapeString(x.shape()));
  }
  Var<T> y = MatMulNT(x, tape.Param(layer.weight));
  if (layer.bias) y = AddRowVector(y, tape.Param(*layer.bias));
  return y;
}

template <typename T>
Var<T> ApplyLayerNorm(Tape<T>& tape, const LayerNormParams& ln, Var<T> x) {
  return LayerNorm(x, tape.Param(ln.gamma), tape.Param(ln.beta),
                   static_cast<T>(kLayerNormEps));
}

template <typename T>
Var<T> MultiHeadAttention(Tape<T>& tape, const TransformerLayer& layer,
                          Var<T> x_q, Var<T> x_k, Var<T> x_v,
                          std::vector<Tensor<T>>* attention) {
  const std::size_t d = layer.dim;
  if (layer.num_heads == 0 || d % layer.num_heads != 0) {
    throw ConfigError("head count does not divide model dim");
  }
  for (const Var<T>* x : {&x_q, &x_k, &x_v}) {
    if (x->value().rank() != 2 || x->cols() != d) {
      throw ShapeError("attention input " + ShapeString(x->shape()) +
                       " does not have model dim " + std::to_string(d));
    }
  }
  if (x_k.rows() != x_v.rows()) {
    throw ShapeError("key and value sequences differ in length");
  }
  const std::size_t dh = d / layer.num_heads;
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));
  Var<T> q = ApplyLinear(tape, layer.q_proj, x_q);
  Var<T> k = ApplyLinear(tape, layer.k_proj, x_k);
  Var<T> v = ApplyLinear(tape, layer.v_proj, x_v);
  std::vector<Var<T>> heads;
  heads.reserve(layer.num_heads);
  for (std::size_t h = 0; h < layer.num_heads; ++h) {
    Var<T> qh = layer.num_heads == 1 ? q : SliceCols(q, h * dh, dh);
    Var<T> kh = layer.num_heads == 1 ? k : SliceCols(k, h * dh, dh);
    Var<T> vh = layer.num_heads == 1 ? v : SliceCols(v, h * dh, dh);
    Var<T> weights = Softmax(Scale(MatMulNT(qh, kh), scale), 1);
    if (attention) attention->push_back(weights.value());
    heads.push_back(MatMul(weights, vh));
  }
  Var<T> merged = heads.size() == 1 ? heads.front() : Concat(heads, 1);
  return ApplyLinear(tape, layer.out_proj, merged);
}

template <typename T>
Var<T> ApplyTransformer(Tape<T>& tape, const TransformerLayer& layer,
                        Var<T> x_q, Var<T> x_k, Var<T> x_v) {
  Var<T> attn = MultiHeadAttention(tape, layer, x_q, x_k, x_v);
  Var<T> y1 = ApplyLayerNorm(tape, layer.ln1, Add(x_q, attn));
  Var<T> hidden = Relu(ApplyLinear(tape, layer.ffn_in, y1));
  Var<T> ffn = ApplyLinear(tape, layer.ffn_out, hidden);
  return ApplyLayerNorm(tape, layer.ln2, Add(y1, ffn));
}

std::vector<ParamId> LayerParamIds(const Linear& layer) {
  std::vector<ParamId> ids{layer.weight};
  if (layer.bias) ids.push_back(*layer.bias);
  return ids;
}

std::vector<ParamId> LayerParamIds(const TransformerLayer& layer) {
  std::vector<ParamId> ids;
  for (const Linear* l : {&layer.q_proj, &layer.k_proj, &layer.v_proj,
                          &layer.out_proj, &layer.ffn_in, &layer.ffn_out}) {
    auto part = LayerParamIds(*l);
    ids.insert(ids.end(), part.begin(), part.end());
  }
  for (const LayerNormParams* ln : {&layer.ln1, &layer.ln2}) {
    ids.push_back(ln->gamma);
    ids.push_back(ln->beta);
  }
  return ids;
}

#define RAS_INSTANTIATE(T)                                                    \
  template Linear MakeLinear<T>(ParamSet<T>&, const std::string&, std::size_t, \
                                std::size_t, bool, Rng&);                     \
  template LayerNormParams MakeLayerNorm<T>(ParamSet<T>&, const std::string&, \
                                            std::size_t);                     \
  template TransformerLayer MakeTransformerLayer<T>(                          \
      ParamSet<T>&, const std::string&, std::size_t, std::size_t,             \
      std::size_t, Rng&);                                                     \
  template Var<T> ApplyLinear<T>(Tape<T>&, const Linear&, Var<T>);            \
  template Var<T> ApplyLayerNorm<T>(Tape<T>&, const LayerNormParams&, Var<T>); \
  template Var<T> MultiHeadAttention<T>(Tape<T>&, const TransformerLayer&,    \
                                        Var<T>, Var<T>, Var<T>,               \
                                        std::vector<Tensor<T>>*);             \
  template Var<T> ApplyTransformer<T>(Tape<T>&, const TransformerLayer&,      \
                                      Var<T>, Var<T>, Var<T>);
RAS_INSTANTIATE(float)
RAS_INSTANTIATE(double)
#undef RAS_INSTANTIATE

}  // namespace ras

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

#include "ras/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "ras/linalg.hpp"
#include "ras/simd/kernels.hpp"

namespace ras {

template <typename T>
void Gradients<T>::Accumulate(const Gradients& other, T scale) {
  if (other.grads.size() != grads.size()) {
    throw ContractError("gradient sets of different size");
  }
  const auto& k = simd::ActiveKernels<T>();
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!other.touched[i]) continue;
    Tensor<T>& dst = Slot(i, other.grads[i].shape());
    k.axpy(scale, other.grads[i].data(), dst.data(), dst.size());
  }
}

// ---- Tape ------------------------------------------------------------------

template <typename T>
Var<T> Tape<T>::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var<T>(this, nodes_.size() - 1);
}

template <typename T>
Var<T> Tape<T>::Constant(Tensor<T> value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  return Push(std::move(n));
}

template <typename T>
Var<T> Tape<T>::Leaf(Tensor<T> value) {
  Node n;
  n.op = "leaf";
  n.value = std::move(value);
  n.requires_grad = true;
  return Push(std::move(n));
}

template <typename T>
Var<T> Tape<T>::Param(ParamId id) {
  if (params_ == nullptr || id >= params_->size()) {
    throw ContractError("tape has no parameter " + std::to_string(id));
  }
  if (param_nodes_[id] != kNone) return Var<T>(this, param_nodes_[id]);
  Node n;
  n.op = "param";
  n.borrowed = &(*params_)[id].value;
  n.requires_grad = track_params_;
  n.param = id;
  Var<T> v = Push(std::move(n));
  param_nodes_[id] = v.id();
  return v;
}

template <typename T>
Var<T> Tape<T>::Record(std::string_view op, Tensor<T> value,
                       const std::vector<std::size_t>& inputs,
                       BackwardFn backward) {
  if (backward_done_) throw StateError("tape already differentiated; Reset() first");
  Node n;
  n.op = op;
  n.value = std::move(value);
  for (std::size_t id : inputs) n.requires_grad |= nodes_[id].requires_grad;
  if (n.requires_grad) n.backward = std::move(backward);
  return Push(std::move(n));
}

template <typename T>
Var<T> Tape<T>::Record(std::string_view op, Tensor<T> value,
                       std::initializer_list<std::size_t> inputs,
                       BackwardFn backward) {
  return Record(op, std::move(value), std::vector<std::size_t>(inputs),
                std::move(backward));
}

template <typename T>
const Tensor<T>& Tape<T>::Value(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.borrowed ? *n.borrowed : n.value;
}

template <typename T>
std::span<T> Tape<T>::InGrad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(Value(id).size(), T{0});
  return n.grad;
}

template <typename T>
void Tape<T>::Backward(Var<T> loss, Gradients<T>* param_grads) {
  if (backward_done_) throw StateError("backward called twice without Reset()");
  if (nodes_.empty()) throw ContractError("backward on an empty tape");
  if (loss.tape() != this) throw ContractError("loss recorded on another tape");
  if (Value(loss.id()).size() != 1) {
    throw ContractError("backward needs a scalar loss, got " +
                        ShapeString(Value(loss.id()).shape()));
  }
  backward_done_ = true;
  if (!nodes_[loss.id()].requires_grad) return;
  InGrad(loss.id())[0] = T{1};
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, i);
    if (n.param != kNone && param_grads != nullptr) {
      Tensor<T>& dst = param_grads->Slot(n.param, n.borrowed->shape());
      for (std::size_t j = 0; j < n.grad.size(); ++j) dst[j] += n.grad[j];
    }
  }
}

template <typename T>
void Tape<T>::Reset() {
  nodes_.clear();
  std::fill(param_nodes_.begin(), param_nodes_.end(), kNone);
  backward_done_ = false;
}

template <typename T>
Tensor<T> Tape<T>::Grad(Var<T> v) const {
  const Node& n = nodes_[v.id()];
  if (n.grad.empty()) return Tensor<T>(Value(v.id()).shape());
  return Tensor<T>(Value(v.id()).shape(), n.grad);
}

template class Tape<float>;
template class Tape<double>;
template struct Gradients<float>;
template struct Gradients<double>;

// ---- Ops -------------------------------------------------------------------

namespace {

template <typename T>
Tape<T>& SameTape(const Var<T>& a, const Var<T>& b) {
  if (a.tape() == nullptr || a.tape() != b.tape()) {
    throw ContractError("operands live on different tapes");
  }
  return *a.tape();
}

template <typename T>
void RequireSameShape(const Var<T>& a, const Var<T>& b, std::string_view op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": " + ShapeString(a.shape()) + " vs " +
                     ShapeString(b.shape()));
  }
}

template <typename T>
void RequireMatrix(const Var<T>& a, std::string_view op) {
  if (a.value().rank() != 2) {
    throw ShapeError(std::string(op) + " needs a matrix, got " +
                     ShapeString(a.shape()));
  }
}

// c[m x n] += a[m x k] * b[k x n], raw contiguous buffers.
template <typename T>
void Gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b,
          T* c) {
  if (m == 0 || n == 0 || k == 0) return;
  simd::ActiveKernels<T>().gemm(m, n, k, a, k, b, n, c, n);
}

template <typename T>
std::vector<T> TransposeRaw(const T* src, std::size_t rows, std::size_t cols) {
  std::vector<T> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = src[r * cols + c];
  return out;
}

}  // namespace

template <typename T>
Var<T> MatMul(Var<T> a, Var<T> b) {
  Tape<T>& tape = SameTape(a, b);
  RequireMatrix(a, "matmul");
  RequireMatrix(b, "matmul");
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul inner extents differ: " + ShapeString(a.shape()) +
                     " x " + ShapeString(b.shape()));
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor<T> out({m, n});
  Gemm(m, n, k, a.value().data(), b.value().data(), out.data());
  const std::size_t ia = a.id(), ib = b.id();
  return tape.Record("matmul", std::move(out), {ia, ib},
                     [=](Tape<T>& t, std::size_t self) {
    const T* dc = t.OutGrad(self).data();
    if (t.RequiresGrad(ia)) {
      // dA += dC * B^T
      auto bt = TransposeRaw(t.Value(ib).data(), k, n);
      Gemm(m, k, n, dc, bt.data(), t.InGrad(ia).data());
    }
    if (t.RequiresGrad(ib)) {
      // dB += A^T * dC
      auto at = TransposeRaw(t.Value(ia).data(), m, k);
      Gemm(k, n, m, at.data(), dc, t.InGrad(ib).data());
    }
  });
}

template <typename T>
Var<T> MatMulNT(Var<T> a, Var<T> b) {
  Tape<T>& tape = SameTape(a, b);
  RequireMatrix(a, "matmul_nt");
  RequireMatrix(b, "matmul_nt");
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt inner extents differ: " +
                     ShapeString(a.shape()) + " x " + ShapeString(b.shape()) +
                     "^T");
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  Tensor<T> out({m, n});
  {
    auto bt = TransposeRaw(b.value().data(), n, k);
    Gemm(m, n, k, a.value().data(), bt.data(), out.data());
  }
  const std::size_t ia = a.id(), ib = b.id();
  return tape.Record("matmul_nt", std::move(out), {ia, ib},
                     [=](Tape<T>& t, std::size_t self) {
    const T* dc = t.OutGrad(self).data();
    if (t.RequiresGrad(ia)) {
      // dA += dC * B
      Gemm(m, k, n, dc, t.Value(ib).data(), t.InGrad(ia).data());
    }
    if (t.RequiresGrad(ib)) {
      // dB += dC^T * A
      auto dct = TransposeRaw(dc, m, n);
      Gemm(n, k, m, dct.data(), t.Value(ia).data(), t.InGrad(ib).data());
    }
  });
}

template <typename T>
Var<T> Add(Var<T> a, Var<T> b) {
  Tape<T>& tape = SameTape(a, b);
  RequireSameShape(a, b, "add");
  Tensor<T> out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.Record("add", std::move(out), {ia, ib},
                     [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    for (std::size_t in : {ia, ib}) {
      if (!t.RequiresGrad(in)) continue;
      auto d = t.InGrad(in);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    }
  });
}

template <typename T>
Var<T> Sub(Var<T> a, Var<T> b) {
  Tape<T>& tape = SameTape(a, b);
  RequireSameShape(a, b, "sub");
  Tensor<T> out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.value()[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.Record("sub", std::move(out), {ia, ib},
                     [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    if (t.RequiresGrad(ia)) {
      auto d = t.InGrad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    }
    if (t.RequiresGrad(ib)) {
      auto d = t.InGrad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] -= g[i];
    }
  });
}

template <typename T>
Var<T> Mul(Var<T> a, Var<T> b) {
  Tape<T>& tape = SameTape(a, b);
  RequireSameShape(a, b, "mul");
  Tensor<T> out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.Record("mul", std::move(out), {ia, ib},
                     [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    if (t.RequiresGrad(ia)) {
      auto d = t.InGrad(ia);
      const auto& bv = t.Value(ib);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * bv[i];
    }
    if (t.RequiresGrad(ib)) {
      auto d = t.InGrad(ib);
      const auto& av = t.Value(ia);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * av[i];
    }
  });
}

template <typename T>
Var<T> Scale(Var<T> a, T s) {
  Tensor<T> out = a.value();
  for (auto& v : out.storage()) v *= s;
  const std::size_t ia = a.id();
  return a.tape()->Record("scale", std::move(out), {ia},
                          [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    auto d = t.InGrad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) d[i] += s * g[i];
  });
}

template <typename T>
Var<T> Sigmoid(Var<T> a) {
  Tensor<T> out = a.value();
  for (auto& v : out.storage()) {
    if (v >= 0) {
      v = T{1} / (T{1} + std::exp(-v));
    } else {
      const T e = std::exp(v);
      v = e / (T{1} + e);
    }
  }
  const std::size_t ia = a.id();
  return a.tape()->Record("sigmoid", std::move(out), {ia},
                          [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    const auto& s = t.Value(self);
    auto d = t.InGrad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * s[i] * (T{1} - s[i]);
  });
}

template <typename T>
Var<T> Relu(Var<T> a) {
  Tensor<T> out = a.value();
  for (auto& v : out.storage()) v = v > 0 ? v : T{0};
  const std::size_t ia = a.id();
  return a.tape()->Record("relu", std::move(out), {ia},
                          [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    const auto& x = t.Value(ia);
    auto d = t.InGrad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) if (x[i] > 0) d[i] += g[i];
  });
}

template <typename T>
Var<T> Elementwise(ElementwiseOp op, Var<T> a, std::optional<Var<T>> b) {
  const bool binary = op == ElementwiseOp::kAdd || op == ElementwiseOp::kSub ||
                      op == ElementwiseOp::kMul;
  if (binary != b.has_value()) {
    throw ContractError("elementwise op arity mismatch");
  }
  switch (op) {
    case ElementwiseOp::kAdd: return Add(a, *b);
    case ElementwiseOp::kSub: return Sub(a, *b);
    case ElementwiseOp::kMul: return Mul(a, *b);
    case ElementwiseOp::kSigmoid: return Sigmoid(a);
    case ElementwiseOp::kRelu: return Relu(a);
  }
  throw ContractError("unknown elementwise op");
}

template <typename T>
Var<T> AddRowVector(Var<T> a, Var<T> v) {
  Tape<T>& tape = SameTape(a, v);
  RequireMatrix(a, "add_row_vector");
  const std::size_t m = a.rows(), n = a.cols();
  if (v.value().size() != n) {
    throw ShapeError("row vector " + ShapeString(v.shape()) +
                     " does not match " + ShapeString(a.shape()));
  }
  Tensor<T> out = a.value();
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out.at(r, c) += v.value()[c];
  const std::size_t ia = a.id(), iv = v.id();
  return tape.Record("add_row_vector", std::move(out), {ia, iv},
                     [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    if (t.RequiresGrad(ia)) {
      auto d = t.InGrad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    }
    if (t.RequiresGrad(iv)) {
      auto d = t.InGrad(iv);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) d[c] += g[r * n + c];
    }
  });
}

template <typename T>
Var<T> Sum(Var<T> a) {
  T total = 0;
  for (T v : a.value().values()) total += v;
  const std::size_t ia = a.id();
  return a.tape()->Record("sum", Tensor<T>({1}, std::vector<T>{total}), {ia},
                          [=](Tape<T>& t, std::size_t self) {
    const T g = t.OutGrad(self)[0];
    for (T& d : t.InGrad(ia)) d += g;
  });
}

template <typename T>
Var<T> Transpose(Var<T> a) {
  RequireMatrix(a, "transpose");
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t ia = a.id();
  return a.tape()->Record("transpose", Transposed(a.value()), {ia},
                          [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);  // [n x m]
    auto d = t.InGrad(ia);     // [m x n]
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < n; ++c) d[r * n + c] += g[c * m + r];
  });
}

template <typename T>
Var<T> Softmax(Var<T> a, std::size_t axis) {
  const Tensor<T>& x = a.value();
  if (x.rank() == 0 || x.rank() > 2 || axis >= x.rank()) {
    throw ShapeError("softmax axis " + std::to_string(axis) + " invalid for " +
                     ShapeString(x.shape()));
  }
  // View as [outer x len x inner].
  const std::size_t len = x.dim(axis);
  const std::size_t inner = (x.rank() == 2 && axis == 0) ? x.dim(1) : 1;
  const std::size_t outer = x.size() / (len * inner);
  Tensor<T> out(x.shape());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      T mx = x[base];
      for (std::size_t j = 1; j < len; ++j) mx = std::max(mx, x[base + j * inner]);
      T z = 0;
      for (std::size_t j = 0; j < len; ++j) {
        const T e = std::exp(x[base + j * inner] - mx);
        out[base + j * inner] = e;
        z += e;
      }
      for (std::size_t j = 0; j < len; ++j) out[base + j * inner] /= z;
    }
  }
  const std::size_t ia = a.id();
  return a.tape()->Record("softmax", std::move(out), {ia},
                          [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    const auto& y = t.Value(self);
    auto d = t.InGrad(ia);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        const std::size_t base = o * len * inner + in;
        T dot = 0;
        for (std::size_t j = 0; j < len; ++j) {
          const std::size_t k = base + j * inner;
          dot += g[k] * y[k];
        }
        for (std::size_t j = 0; j < len; ++j) {
          const std::size_t k = base + j * inner;
          d[k] += y[k] * (g[k] - dot);
        }
      }
    }
  });
}

template <typename T>
Var<T> LayerNorm(Var<T> x, Var<T> gamma, Var<T> beta, T eps) {
  Tape<T>& tape = SameTape(x, gamma);
  SameTape(x, beta);
  RequireMatrix(x, "layer_norm");
  const std::size_t n = x.rows(), c = x.cols();
  if (gamma.value().size() != c || beta.value().size() != c) {
    throw ShapeError("layer_norm parameters do not match " +
                     ShapeString(x.shape()));
  }
  const auto& xv = x.value();
  const auto& gv = gamma.value();
  const auto& bv = beta.value();
  Tensor<T> out({n, c});
  std::vector<T> xhat(n * c);
  std::vector<T> inv_std(n);
  for (std::size_t r = 0; r < n; ++r) {
    T mean = 0;
    for (std::size_t j = 0; j < c; ++j) mean += xv.at(r, j);
    mean /= static_cast<T>(c);
    T var = 0;
    for (std::size_t j = 0; j < c; ++j) {
      const T dlt = xv.at(r, j) - mean;
      var += dlt * dlt;
    }
    var /= static_cast<T>(c);
    const T is = T{1} / std::sqrt(var + eps);
    inv_std[r] = is;
    for (std::size_t j = 0; j < c; ++j) {
      const T h = (xv.at(r, j) - mean) * is;
      xhat[r * c + j] = h;
      out.at(r, j) = gv[j] * h + bv[j];
    }
  }
  const std::size_t ix = x.id(), ig = gamma.id(), ib = beta.id();
  return tape.Record(
      "layer_norm", std::move(out), {ix, ig, ib},
      [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](
          Tape<T>& t, std::size_t self) {
        auto g = t.OutGrad(self);
        if (t.RequiresGrad(ig)) {
          auto d = t.InGrad(ig);
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < c; ++j) d[j] += g[r * c + j] * xhat[r * c + j];
        }
        if (t.RequiresGrad(ib)) {
          auto d = t.InGrad(ib);
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < c; ++j) d[j] += g[r * c + j];
        }
        if (t.RequiresGrad(ix)) {
          const auto& gam = t.Value(ig);
          auto d = t.InGrad(ix);
          const T inv_c = T{1} / static_cast<T>(c);
          for (std::size_t r = 0; r < n; ++r) {
            T mean_dh = 0, mean_dh_h = 0;
            for (std::size_t j = 0; j < c; ++j) {
              const T dh = g[r * c + j] * gam[j];
              mean_dh += dh;
              mean_dh_h += dh * xhat[r * c + j];
            }
            mean_dh *= inv_c;
            mean_dh_h *= inv_c;
            for (std::size_t j = 0; j < c; ++j) {
              const T dh = g[r * c + j] * gam[j];
              d[r * c + j] +=
                  inv_std[r] * (dh - mean_dh - xhat[r * c + j] * mean_dh_h);
            }
          }
        }
      });
}

template <typename T>
Var<T> Concat(const std::vector<Var<T>>& parts, std::size_t axis) {
  if (parts.empty()) throw ContractError("concat of nothing");
  if (axis > 1) throw ShapeError("concat axis must be 0 or 1");
  Tape<T>& tape = *parts.front().tape();
  for (const auto& p : parts) {
    SameTape(parts.front(), p);
    RequireMatrix(p, "concat");
  }
  const std::size_t fixed = parts.front().value().dim(1 - axis);
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.value().dim(1 - axis) != fixed) {
      throw ShapeError("concat trailing extents differ: " +
                       ShapeString(parts.front().shape()) + " vs " +
                       ShapeString(p.shape()));
    }
    total += p.value().dim(axis);
  }
  Tensor<T> out(axis == 0 ? Shape{total, fixed} : Shape{fixed, total});
  std::vector<std::size_t> ids, offsets;
  std::size_t off = 0;
  for (const auto& p : parts) {
    const auto& v = p.value();
    if (axis == 0) {
      std::copy(v.values().begin(), v.values().end(), out.data() + off * fixed);
    } else {
      for (std::size_t r = 0; r < fixed; ++r)
        for (std::size_t c = 0; c < v.cols(); ++c) out.at(r, off + c) = v.at(r, c);
    }
    ids.push_back(p.id());
    offsets.push_back(off);
    off += v.dim(axis);
  }
  return tape.Record("concat", std::move(out), ids,
                     [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!t.RequiresGrad(ids[i])) continue;
      const auto& v = t.Value(ids[i]);
      if (v.empty()) continue;
      auto d = t.InGrad(ids[i]);
      if (axis == 0) {
        for (std::size_t j = 0; j < v.size(); ++j) d[j] += g[offsets[i] * fixed + j];
      } else {
        const std::size_t w = v.cols();
        for (std::size_t r = 0; r < fixed; ++r)
          for (std::size_t c = 0; c < w; ++c)
            d[r * w + c] += g[r * total + offsets[i] + c];
      }
    }
  });
}

template <typename T>
Var<T> SliceCols(Var<T> a, std::size_t start, std::size_t count) {
  RequireMatrix(a, "slice_cols");
  const std::size_t m = a.rows(), n = a.cols();
  if (start + count > n) throw ShapeError("slice_cols out of range");
  Tensor<T> out({m, count});
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < count; ++c) out.at(r, c) = a.value().at(r, start + c);
  const std::size_t ia = a.id();
  return a.tape()->Record("slice_cols", std::move(out), {ia},
                          [=](Tape<T>& t, std::size_t self) {
    auto g = t.OutGrad(self);
    auto d = t.InGrad(ia);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < count; ++c) d[r * n + start + c] += g[r * count + c];
  });
}

#define RAS_INSTANTIATE(T)                                                    \
  template Var<T> MatMul<T>(Var<T>, Var<T>);                                  \
  template Var<T> MatMulNT<T>(Var<T>, Var<T>);                                \
  template Var<T> Add<T>(Var<T>, Var<T>);                                     \
  template Var<T> Sub<T>(Var<T>, Var<T>);                                     \
  template Var<T> Mul<T>(Var<T>, Var<T>);                                     \
  template Var<T> Scale<T>(Var<T>, T);                                        \
  template Var<T> Sigmoid<T>(Var<T>);                                         \
  template Var<T> Relu<T>(Var<T>);                                            \
  template Var<T> Elementwise<T>(ElementwiseOp, Var<T>, std::optional<Var<T>>); \
  template Var<T> AddRowVector<T>(Var<T>, Var<T>);                            \
  template Var<T> Sum<T>(Var<T>);                                             \
  template Var<T> Transpose<T>(Var<T>);                                       \
  template Var<T> Softmax<T>(Var<T>, std::size_t);                            \
  template Var<T> LayerNorm<T>(Var<T>, Var<T>, Var<T>, T);                    \
  template Var<T> Concat<T>(const std::vector<Var<T>>&, std::size_t);         \
  template Var<T> SliceCols<T>(Var<T>, std::size_t, std::size_t);
RAS_INSTANTIATE(float)
RAS_INSTANTIATE(double)
#undef RAS_INSTANTIATE

}  // namespace ras

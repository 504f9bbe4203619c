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

#ifndef RAS_AUTODIFF_HPP_
#define RAS_AUTODIFF_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ras/tensor.hpp"

namespace ras {

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
};

using ParamId = std::size_t;

// Owns every learnable tensor of a model. Indices are stable for the life of
// the set; names are unique.
template <typename T>
class ParamSet {
 public:
  ParamId Add(std::string name, Tensor<T> value) {
    if (index_.contains(name)) {
      throw ContractError("parameter registered twice: " + name);
    }
    index_.emplace(name, params_.size());
    params_.push_back({std::move(name), std::move(value)});
    return params_.size() - 1;
  }

  std::size_t size() const { return params_.size(); }
  Parameter<T>& operator[](ParamId id) { return params_[id]; }
  const Parameter<T>& operator[](ParamId id) const { return params_[id]; }
  std::optional<ParamId> Find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t NumScalars() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.value.size();
    return n;
  }

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  std::vector<Parameter<T>> params_;
  std::unordered_map<std::string, ParamId> index_;
};

// Per-parameter gradient buffers, index-aligned with a ParamSet. A parameter
// that no gradient reached keeps an empty tensor.
template <typename T>
struct Gradients {
  std::vector<Tensor<T>> grads;
  std::vector<bool> touched;

  explicit Gradients(std::size_t n = 0) : grads(n), touched(n, false) {}
  Tensor<T>& Slot(ParamId id, const Shape& shape) {
    if (!touched[id]) {
      grads[id] = Tensor<T>(shape);
      touched[id] = true;
    }
    return grads[id];
  }
  // Adds other * scale into this, in a fixed per-parameter order.
  void Accumulate(const Gradients& other, T scale = T{1});
};

template <typename T>
class Tape;

// Handle to a value recorded on a tape.
template <typename T>
class Var {
 public:
  Var() = default;
  Var(Tape<T>* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape<T>* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  const Tensor<T>& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const;
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape<T>* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Define-by-run reverse-mode tape. Nodes are appended in evaluation order, so
// insertion order is a topological order and backward replays it in reverse.
template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  // With track_params = false parameter leaves are treated as constants and
  // nothing is recorded for backward (inference).
  explicit Tape(const ParamSet<T>* params = nullptr, bool track_params = true)
      : params_(params), track_params_(track_params) {
    if (params_) param_nodes_.assign(params_->size(), kNone);
  }
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var<T> Constant(Tensor<T> value);
  // A leaf whose gradient is retrievable through Grad() after Backward().
  Var<T> Leaf(Tensor<T> value);
  // Leaf bound to a registered parameter; the value is borrowed, not copied.
  // Repeated calls for one id return the same node.
  Var<T> Param(ParamId id);

  // Records an op result. `inputs` decide whether the result needs a gradient.
  Var<T> Record(std::string_view op, Tensor<T> value,
                std::initializer_list<std::size_t> inputs, BackwardFn backward);
  Var<T> Record(std::string_view op, Tensor<T> value,
                const std::vector<std::size_t>& inputs, BackwardFn backward);

  // Seeds d(loss)=1 and propagates. Parameter gradients are added into
  // `param_grads` when given. Throws ContractError for a non-scalar loss and
  // StateError when called a second time before Reset().
  void Backward(Var<T> loss, Gradients<T>* param_grads = nullptr);
  void Reset();

  const Tensor<T>& Value(std::size_t id) const;
  bool RequiresGrad(std::size_t id) const { return nodes_[id].requires_grad; }
  std::string_view Op(std::size_t id) const { return nodes_[id].op; }
  // Gradient of the last Backward() loss w.r.t. a node; zeros if unreached.
  Tensor<T> Grad(Var<T> v) const;
  std::size_t size() const { return nodes_.size(); }

  // Used inside backward functions.
  std::span<const T> OutGrad(std::size_t id) const { return nodes_[id].grad; }
  // Zero-initialised on first use; callers must check RequiresGrad first.
  std::span<T> InGrad(std::size_t id);

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Node {
    std::string_view op;
    Tensor<T> value;
    const Tensor<T>* borrowed = nullptr;
    std::vector<T> grad;
    bool requires_grad = false;
    std::size_t param = kNone;
    BackwardFn backward;
  };

  Var<T> Push(Node node);

  const ParamSet<T>* params_;
  bool track_params_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> param_nodes_;
  bool backward_done_ = false;
};

template <typename T>
const Tensor<T>& Var<T>::value() const {
  return tape_->Value(id_);
}
template <typename T>
bool Var<T>::requires_grad() const {
  return tape_->RequiresGrad(id_);
}

// ---- Differentiable ops --------------------------------------------------
// All tensors are rank 2 unless stated; "rows" index tokens and "cols" index
// channels in the model code.

template <typename T> Var<T> MatMul(Var<T> a, Var<T> b);    // a[MxK] b[KxN]
template <typename T> Var<T> MatMulNT(Var<T> a, Var<T> b);  // a[MxK] b[NxK]
template <typename T> Var<T> Add(Var<T> a, Var<T> b);
template <typename T> Var<T> Sub(Var<T> a, Var<T> b);
template <typename T> Var<T> Mul(Var<T> a, Var<T> b);
template <typename T> Var<T> Scale(Var<T> a, T s);
template <typename T> Var<T> Sigmoid(Var<T> a);
template <typename T> Var<T> Relu(Var<T> a);
// a[MxN] + v[N] broadcast over rows.
template <typename T> Var<T> AddRowVector(Var<T> a, Var<T> v);
template <typename T> Var<T> Sum(Var<T> a);  // -> shape {1}
template <typename T> Var<T> Transpose(Var<T> a);
// Softmax along `axis` of a rank-1 or rank-2 tensor, max-subtracted.
template <typename T> Var<T> Softmax(Var<T> a, std::size_t axis);
// Normalises each row of x[NxC] then applies gamma[C], beta[C].
template <typename T>
Var<T> LayerNorm(Var<T> x, Var<T> gamma, Var<T> beta, T eps);
// Rank-2 concatenation along axis 0 or 1. Zero-extent parts are allowed.
template <typename T>
Var<T> Concat(const std::vector<Var<T>>& parts, std::size_t axis);
template <typename T>
Var<T> SliceCols(Var<T> a, std::size_t start, std::size_t count);

// Elementwise ops by tag, for callers that choose the op at runtime.
enum class ElementwiseOp { kAdd, kSub, kMul, kSigmoid, kRelu };
template <typename T>
Var<T> Elementwise(ElementwiseOp op, Var<T> a, std::optional<Var<T>> b = {});

// Channel concatenation. For the model's token-major [tokens x channels]
// layout this is the last axis.
template <typename T>
Var<T> ConcatChannels(Var<T> a, Var<T> b) {
  return Concat<T>({a, b}, 1);
}

template <typename T> Var<T> operator+(Var<T> a, Var<T> b) { return Add(a, b); }
template <typename T> Var<T> operator-(Var<T> a, Var<T> b) { return Sub(a, b); }
template <typename T> Var<T> operator*(Var<T> a, Var<T> b) { return Mul(a, b); }

}  // namespace ras

#endif  // RAS_AUTODIFF_HPP_

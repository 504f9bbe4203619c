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

#ifndef RAS_TRAIN_HPP_
#define RAS_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ras/config.hpp"
#include "ras/model.hpp"

namespace ras {

// Sum of squared differences over all entries divided by the token count
// (the column count of the [C_org x L] inputs), not by C_org * L.
template <typename T>
double MseLoss(const Tensor<T>& f_org, const Tensor<T>& f_rec);
template <typename T>
Var<T> MseLoss(Var<T> f_org, Var<T> f_rec);

template <typename T>
struct AdamWState {
  std::uint64_t step = 0;
  std::vector<Tensor<T>> m;  // indexed by ParamId; empty until the first step
  std::vector<Tensor<T>> v;

  friend bool operator==(const AdamWState&, const AdamWState&) = default;
};

// One AdamW update of the listed parameters with decoupled weight decay and
// bias-corrected moments. StateError if any listed parameter has no gradient.
template <typename T>
void AdamWStep(ParamSet<T>& params, const std::vector<ParamId>& ids,
               const Gradients<T>& grads, AdamWState<T>& state,
               const AdamWConfig& config);

template <typename T>
struct TrainState {
  RunConfig config;
  RasModel<T> model;
  AdamWState<T> optim;
  Rng rng;  // shuffling and training noise
  std::uint64_t epoch = 0;
  std::vector<double> epoch_losses;

  // Fresh state; config.model must be complete.
  explicit TrainState(const RunConfig& config);
};

// Worker count from RAS_THREADS, else the hardware concurrency.
std::size_t WorkerThreads();

template <typename T>
class Trainer {
 public:
  explicit Trainer(const RunConfig& config) : state_(config) {}
  explicit Trainer(TrainState<T> state) : state_(std::move(state)) {}

  // One optimizer step on the mean loss of `batch`. Noise is drawn from the
  // state rng in batch order before any gradient work, so the result does
  // not depend on the thread count.
  double Step(const std::vector<const Tensor<T>*>& batch);

  // Shuffles, then steps through consecutive batches; returns the mean
  // per-sample loss and appends it to the history.
  double RunEpoch(const std::vector<Tensor<T>>& data);

  // Runs epochs until config.epochs is reached.
  void Fit(const std::vector<Tensor<T>>& data,
           const std::function<void(std::uint64_t, double)>& on_epoch = {});

  TrainState<T>& state() { return state_; }
  const TrainState<T>& state() const { return state_; }
  const RasModel<T>& model() const { return state_.model; }

 private:
  TrainState<T> state_;
};

// Mean eval-mode loss over `data`.
template <typename T>
double MeanLoss(const RasModel<T>& model, const std::vector<Tensor<T>>& data);

// Checkpoint, version 1, little-endian:
//   "RASC" | u16 version | u16 dtype (1 = f32, 2 = f64) | str config |
//   u32 n | n x (str name | u32 ndim | ndim x u32 dim | data) |
//   u64 adam step | u32 k (0 or n) | k x (m data | v data) |
//   str rng state | u64 epoch | u32 e | e x f64 epoch loss
// where str is u32 length + bytes and data uses the dtype.
inline constexpr std::uint16_t kCheckpointVersion = 1;

template <typename T>
void SaveCheckpoint(const TrainState<T>& state, const std::string& path);
template <typename T>
TrainState<T> LoadCheckpoint(const std::string& path);

}  // namespace ras

#endif  // RAS_TRAIN_HPP_

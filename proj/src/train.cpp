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

#include "ras/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "ras/binary_io.hpp"

namespace ras {
namespace {

Rng TrainRng(std::uint64_t seed) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   0x7EA1u};
  return Rng(ss);
}

template <typename T>
constexpr std::uint16_t DtypeCode() {
  return sizeof(T) == 4 ? 1 : 2;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers with a static split.
void ParallelFor(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
  }
}

}  // namespace

std::size_t WorkerThreads() {
  if (const char* env = std::getenv("RAS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <typename T>
double MseLoss(const Tensor<T>& f_org, const Tensor<T>& f_rec) {
  if (f_org.shape() != f_rec.shape() || f_org.rank() != 2) {
    throw ShapeError("mse_loss operands differ: " + ShapeString(f_org.shape()) + " vs " +
                     ShapeString(f_rec.shape()));
  }
  double sum = 0;
  for (std::size_t i = 0; i < f_org.size(); ++i) {
    const double d = static_cast<double>(f_org[i]) - static_cast<double>(f_rec[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(f_org.cols());
}

template <typename T>
Var<T> MseLoss(Var<T> f_org, Var<T> f_rec) {
  if (f_org.shape() != f_rec.shape() || f_org.value().rank() != 2) {
    throw ShapeError("mse_loss operands differ: " + ShapeString(f_org.shape()) + " vs " +
                     ShapeString(f_rec.shape()));
  }
  Var<T> d = Sub(f_org, f_rec);
  return Scale(Sum(Mul(d, d)), static_cast<T>(1.0 / static_cast<double>(f_org.cols())));
}

template <typename T>
void AdamWStep(ParamSet<T>& params, const std::vector<ParamId>& ids,
               const Gradients<T>& grads, AdamWState<T>& state,
               const AdamWConfig& config) {
  if (grads.grads.size() != params.size()) {
    throw ContractError("gradient set does not match the parameter set");
  }
  for (ParamId id : ids) {
    if (!grads.touched[id]) throw StateError("no gradient for parameter " + params[id].name);
  }
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), Tensor<T>());
    state.v.assign(params.size(), Tensor<T>());
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1 - std::pow(config.beta1, t);
  const double bc2 = 1 - std::pow(config.beta2, t);
  const double decay = 1 - config.lr * config.weight_decay;
  for (ParamId id : ids) {
    Tensor<T>& p = params[id].value;
    const Tensor<T>& g = grads.grads[id];
    if (state.m[id].shape() != p.shape()) {
      state.m[id] = Tensor<T>(p.shape());
      state.v[id] = Tensor<T>(p.shape());
    }
    T* m = state.m[id].data();
    T* v = state.v[id].data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      m[i] = static_cast<T>(config.beta1 * m[i] + (1 - config.beta1) * gi);
      v[i] = static_cast<T>(config.beta2 * v[i] + (1 - config.beta2) * gi * gi);
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p[i] = static_cast<T>(p[i] * decay - config.lr * mhat / (std::sqrt(vhat) + config.eps));
    }
  }
}

template <typename T>
TrainState<T>::TrainState(const RunConfig& cfg)
    : config(cfg), model(cfg.model, cfg.seed), rng(TrainRng(cfg.seed)) {
  config.Validate();
}

template <typename T>
double Trainer<T>::Step(const std::vector<const Tensor<T>*>& batch) {
  if (batch.empty()) throw ContractError("empty training batch");
  RasModel<T>& model = state_.model;
  const double alpha = model.config().alpha_train;
  std::vector<Tensor<T>> noisy;
  noisy.reserve(batch.size());
  for (const Tensor<T>* f : batch) noisy.push_back(InjectNoise(*f, alpha, state_.rng));

  std::vector<Gradients<T>> per_sample(batch.size(), Gradients<T>(model.params().size()));
  std::vector<double> losses(batch.size());
  ParallelFor(batch.size(), WorkerThreads(), [&](std::size_t i) {
    Tape<T> tape(&model.params());
    const ForwardResult<T> r = Forward(tape, model, noisy[i], false, nullptr);
    Var<T> loss = MseLoss(tape.Constant(*batch[i]), r.f_rec);
    losses[i] = static_cast<double>(loss.value()[0]);
    tape.Backward(loss, &per_sample[i]);
  });

  Gradients<T> total(model.params().size());
  const T scale = static_cast<T>(1.0 / static_cast<double>(batch.size()));
  double mean = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    total.Accumulate(per_sample[i], scale);
    mean += losses[i];
  }
  mean /= static_cast<double>(batch.size());
  if (!std::isfinite(mean)) {
    throw StateError("training loss is not finite at step " +
                     std::to_string(state_.optim.step + 1));
  }
  AdamWStep(model.params(), model.TrainableParams(), total, state_.optim, state_.config.optim);
  return mean;
}

template <typename T>
double Trainer<T>::RunEpoch(const std::vector<Tensor<T>>& data) {
  if (data.empty()) throw ContractError("no training samples");
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), state_.rng);
  const std::size_t bs = state_.config.batch_size;
  double total = 0;
  for (std::size_t start = 0; start < order.size(); start += bs) {
    std::vector<const Tensor<T>*> batch;
    for (std::size_t i = start; i < std::min(order.size(), start + bs); ++i)
      batch.push_back(&data[order[i]]);
    total += Step(batch) * static_cast<double>(batch.size());
  }
  const double mean = total / static_cast<double>(data.size());
  ++state_.epoch;
  state_.epoch_losses.push_back(mean);
  return mean;
}

template <typename T>
void Trainer<T>::Fit(const std::vector<Tensor<T>>& data,
                     const std::function<void(std::uint64_t, double)>& on_epoch) {
  while (state_.epoch < state_.config.epochs) {
    const double loss = RunEpoch(data);
    if (on_epoch) on_epoch(state_.epoch, loss);
  }
}

template <typename T>
double MeanLoss(const RasModel<T>& model, const std::vector<Tensor<T>>& data) {
  std::vector<double> losses(data.size());
  ParallelFor(data.size(), WorkerThreads(), [&](std::size_t i) {
    losses[i] = MseLoss(data[i], Reconstruct(model, data[i]));
  });
  double sum = 0;
  for (double l : losses) sum += l;
  return data.empty() ? 0.0 : sum / static_cast<double>(data.size());
}

template <typename T>
void SaveCheckpoint(const TrainState<T>& state, const std::string& path) {
  std::ostringstream os(std::ios::binary);
  os.write("RASC", 4);
  io::WritePod<std::uint16_t>(os, kCheckpointVersion);
  io::WritePod<std::uint16_t>(os, DtypeCode<T>());
  io::WriteString(os, FormatConfig(state.config));
  const ParamSet<T>& params = state.model.params();
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    io::WriteString(os, p.name);
    io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(p.value.rank()));
    for (std::size_t d : p.value.shape()) io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(d));
    io::WriteArray(os, p.value.data(), p.value.size());
  }
  io::WritePod<std::uint64_t>(os, state.optim.step);
  const bool has_moments = !state.optim.m.empty();
  io::WritePod<std::uint32_t>(os, has_moments ? static_cast<std::uint32_t>(params.size()) : 0);
  if (has_moments) {
    for (ParamId id = 0; id < params.size(); ++id) {
      // Parameters the optimizer never touched are stored as zeros.
      const std::size_t n = params[id].value.size();
      const Tensor<T>& m = state.optim.m[id];
      const Tensor<T>& v = state.optim.v[id];
      const std::vector<T> zeros(m.size() == n ? 0 : n);
      io::WriteArray(os, m.size() == n ? m.data() : zeros.data(), n);
      io::WriteArray(os, v.size() == n ? v.data() : zeros.data(), n);
    }
  }
  std::ostringstream rng_text;
  rng_text << state.rng;
  io::WriteString(os, rng_text.str());
  io::WritePod<std::uint64_t>(os, state.epoch);
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(state.epoch_losses.size()));
  io::WriteArray(os, state.epoch_losses.data(), state.epoch_losses.size());

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  const std::string bytes = os.str();
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("write failed for " + path);
}

template <typename T>
TrainState<T> LoadCheckpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path);
  io::ExpectMagic(is, "RASC");
  const auto version = io::ReadPod<std::uint16_t>(is, "version");
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto dtype = io::ReadPod<std::uint16_t>(is, "dtype");
  if (dtype != DtypeCode<T>()) {
    throw FormatError("checkpoint dtype code " + std::to_string(dtype) +
                      " does not match the requested precision");
  }
  RunConfig config;
  try {
    ApplyConfigText(config, io::ReadString(is, "config"));
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint config: ") + e.what());
  }
  TrainState<T> state(config);
  ParamSet<T>& params = state.model.params();
  const auto n = io::ReadPod<std::uint32_t>(is, "parameter count");
  if (n != params.size()) {
    throw FormatError("checkpoint holds " + std::to_string(n) + " parameters, config implies " +
                      std::to_string(params.size()));
  }
  for (auto& p : params) {
    const std::string name = io::ReadString(is, "parameter name");
    if (name != p.name) throw FormatError("expected parameter " + p.name + ", found " + name);
    const auto ndim = io::ReadPod<std::uint32_t>(is, "rank");
    Shape shape;
    for (std::uint32_t d = 0; d < ndim && d < 8; ++d) shape.push_back(io::ReadPod<std::uint32_t>(is, "dim"));
    if (shape != p.value.shape()) {
      throw FormatError("shape of " + name + " is " + ShapeString(shape) + ", expected " +
                        ShapeString(p.value.shape()));
    }
    io::ReadArray(is, p.value.data(), p.value.size(), "checkpoint");
  }
  state.optim.step = io::ReadPod<std::uint64_t>(is, "adam step");
  const auto k = io::ReadPod<std::uint32_t>(is, "moment count");
  if (k != 0 && k != n) throw FormatError("moment block does not match the parameters");
  if (k) {
    state.optim.m.resize(n);
    state.optim.v.resize(n);
    for (ParamId id = 0; id < n; ++id) {
      const Shape& shape = params[id].value.shape();
      state.optim.m[id] = Tensor<T>(shape);
      state.optim.v[id] = Tensor<T>(shape);
      io::ReadArray(is, state.optim.m[id].data(), state.optim.m[id].size(), "checkpoint");
      io::ReadArray(is, state.optim.v[id].data(), state.optim.v[id].size(), "checkpoint");
    }
  }
  std::istringstream rng_text(io::ReadString(is, "rng state"));
  rng_text >> state.rng;
  if (!rng_text) throw FormatError("unreadable rng state");
  state.epoch = io::ReadPod<std::uint64_t>(is, "epoch");
  state.epoch_losses.resize(io::ReadPod<std::uint32_t>(is, "loss count"));
  io::ReadArray(is, state.epoch_losses.data(), state.epoch_losses.size(), "checkpoint");
  io::ExpectEnd(is, "checkpoint");
  return state;
}

#define RAS_INSTANTIATE(T)                                                            \
  template double MseLoss<T>(const Tensor<T>&, const Tensor<T>&);                     \
  template Var<T> MseLoss<T>(Var<T>, Var<T>);                                         \
  template void AdamWStep<T>(ParamSet<T>&, const std::vector<ParamId>&,               \
                             const Gradients<T>&, AdamWState<T>&, const AdamWConfig&); \
  template struct TrainState<T>;                                                      \
  template class Trainer<T>;                                                          \
  template double MeanLoss<T>(const RasModel<T>&, const std::vector<Tensor<T>>&);     \
  template void SaveCheckpoint<T>(const TrainState<T>&, const std::string&);          \
  template TrainState<T> LoadCheckpoint<T>(const std::string&);

RAS_INSTANTIATE(float)
RAS_INSTANTIATE(double)
#undef RAS_INSTANTIATE

}  // namespace ras

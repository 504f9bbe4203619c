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

#include "ras/model.hpp"

#include <cmath>

namespace ras {

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kGateOnly: return "gate_only";
    case Variant::kTransformerOnly: return "transformer_only";
  }
  return "full";
}

Variant ParseVariant(std::string_view name) {
  if (name == "full") return Variant::kFull;
  if (name == "gate_only") return Variant::kGateOnly;
  if (name == "transformer_only") return Variant::kTransformerOnly;
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

void ModelConfig::Validate() const {
  if (c_org == 0 || c_rec == 0 || height == 0 || width == 0) {
    throw ConfigError("model extents must be positive");
  }
  if (num_heads == 0 || c_rec % num_heads != 0) {
    throw ConfigError("c_rec " + std::to_string(c_rec) +
                      " is not divisible by num_heads " +
                      std::to_string(num_heads));
  }
  if (decoders == 0) throw ConfigError("at least one decoder block is required");
  if (ffn_mult == 0) throw ConfigError("ffn_mult must be positive");
  if (!(alpha_train >= 0.0)) throw ConfigError("alpha_train must be >= 0");
}

namespace {

template <typename T>
Tensor<T> SmallNormal(const Shape& shape, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 0.02);
  Tensor<T> t(shape);
  for (auto& v : t.storage()) v = static_cast<T>(dist(rng));
  return t;
}

}  // namespace

template <typename T>
RasModel<T>::RasModel(const ModelConfig& config, std::uint64_t seed)
    : config_(config) {
  config_.Validate();
  Rng rng(seed);
  const std::size_t c_rec = config_.c_rec, c_org = config_.c_org;
  const std::size_t tokens = config_.tokens();
  input_proj_ = MakeLinear(params_, "input_proj", c_org, c_rec, false, rng);
  if (config_.use_encoder_pos_embed) {
    pos_embed_ = params_.Add("pos_embed", SmallNormal<T>({tokens, c_rec}, rng));
  }
  for (std::size_t e = 0; e < config_.encoders; ++e) {
    encoders_.push_back(MakeTransformerLayer(params_, "encoder." + std::to_string(e),
                                             c_rec, config_.num_heads,
                                             config_.ffn_mult, rng));
  }
  for (std::size_t t = 0; t < config_.decoders; ++t) {
    contexts_.push_back(params_.Add("context." + std::to_string(t),
                                    SmallNormal<T>({tokens, c_rec}, rng)));
  }
  // W_o is one projection reused by every step, so each o_t lives in the
  // same reconstruction space.
  const Linear output = MakeLinear(params_, "output_proj", c_rec, c_org, false, rng);
  for (std::size_t t = 0; t < config_.decoders; ++t) {
    const std::string name = "decoder." + std::to_string(t);
    DecoderBlock block;
    block.gate = MakeLinear(params_, name + ".gate", 2 * c_rec, c_rec, true, rng);
    block.transformer = MakeTransformerLayer(params_, name + ".transformer", c_rec,
                                             config_.num_heads, config_.ffn_mult, rng);
    block.fuse = MakeLinear(params_, name + ".fuse", c_rec, c_rec, false, rng);
    block.output = output;
    blocks_.push_back(std::move(block));
  }
}

template <typename T>
std::vector<ParamId> RasModel<T>::TrainableParams() const {
  std::vector<bool> idle(params_.size(), false);
  for (const auto& block : blocks_) {
    if (config_.variant == Variant::kTransformerOnly) {
      for (ParamId id : LayerParamIds(block.gate)) idle[id] = true;
    }
    if (config_.variant == Variant::kGateOnly) {
      for (ParamId id : LayerParamIds(block.transformer)) idle[id] = true;
    }
  }
  std::vector<ParamId> ids;
  for (ParamId id = 0; id < params_.size(); ++id) {
    if (!idle[id]) ids.push_back(id);
  }
  return ids;
}

template <typename T>
std::vector<double> NoiseStd(const Tensor<T>& f_org, double alpha) {
  if (!(alpha >= 0.0)) throw ConfigError("noise intensity alpha must be >= 0");
  if (f_org.rank() != 2) throw ShapeError("noise expects [C x L] features");
  const std::size_t c = f_org.rows(), l = f_org.cols();
  std::vector<double> sigma(l, 0.0);
  for (std::size_t i = 0; i < l; ++i) {
    double sq = 0;
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double v = f_org.at(ch, i);
      sq += v * v;
    }
    sigma[i] = alpha * std::sqrt(sq) / static_cast<double>(c);
  }
  return sigma;
}

template <typename T>
Tensor<T> InjectNoise(const Tensor<T>& f_org, double alpha, Rng& rng) {
  const std::vector<double> sigma = NoiseStd(f_org, alpha);
  Tensor<T> out = f_org;
  if (alpha == 0.0) return out;
  std::normal_distribution<double> unit(0.0, 1.0);
  const std::size_t c = f_org.rows(), l = f_org.cols();
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double eps = unit(rng) * sigma[i];
      out.at(ch, i) = static_cast<T>(out.at(ch, i) + eps);
    }
  }
  return out;
}

template <typename T>
Var<T> Encode(Tape<T>& tape, const RasModel<T>& model, Var<T> f_tokens) {
  const ModelConfig& cfg = model.config();
  if (f_tokens.value().rank() != 2 || f_tokens.rows() != cfg.tokens() ||
      f_tokens.cols() != cfg.c_org) {
    throw ShapeError("encoder expects [" + std::to_string(cfg.tokens()) + "x" +
                     std::to_string(cfg.c_org) + "] tokens, got " +
                     ShapeString(f_tokens.shape()));
  }
  Var<T> x = ApplyLinear(tape, model.input_proj(), f_tokens);
  if (model.pos_embed()) x = Add(x, tape.Param(*model.pos_embed()));
  for (const auto& layer : model.encoders()) x = ApplyTransformer(tape, layer, x, x, x);
  return x;
}

template <typename T>
GateResult<T> AdaptiveGate(Tape<T>& tape, const Linear& gate, Var<T> latent,
                           Var<T> context) {
  if (latent.shape() != context.shape()) {
    throw ShapeError("gate inputs differ: " + ShapeString(latent.shape()) +
                     " vs " + ShapeString(context.shape()));
  }
  Var<T> a = Sigmoid(ApplyLinear(tape, gate, ConcatChannels(latent, context)));
  return {a, Mul(a, latent)};
}

template <typename T>
Var<T> FuseLatent(Tape<T>& tape, const Linear& fuse, Var<T> latent,
                  Var<T> attended) {
  return Scale(Add(ApplyLinear(tape, fuse, latent), attended), T{0.5});
}

template <typename T>
BlockResult<T> RasformerBlock(Tape<T>& tape, const RasModel<T>& model,
                              std::size_t step, Var<T> context, Var<T> latent,
                              const BlockOptions<T>& options) {
  const ModelConfig& cfg = model.config();
  const DecoderBlock& block = model.blocks().at(step);
  const Shape expected{cfg.tokens(), cfg.c_rec};
  if (context.shape() != expected || latent.shape() != expected) {
    throw ShapeError("decoder block expects " + ShapeString(expected) +
                     " context and latent");
  }
  BlockResult<T> r;
  if (cfg.variant == Variant::kTransformerOnly) {
    r.filtered = latent;
  } else if (options.forced_gate) {
    r.gate = tape.Constant(Tensor<T>(expected, *options.forced_gate));
    r.filtered = Mul(r.gate, latent);
  } else {
    auto g = AdaptiveGate(tape, block.gate, latent, context);
    r.gate = g.gate;
    r.filtered = g.filtered;
  }
  if (cfg.variant == Variant::kGateOnly) {
    r.attended = Add(r.filtered, context);
  } else {
    r.attended = ApplyTransformer(tape, block.transformer, context, r.filtered,
                                  r.filtered);
  }
  r.latent = FuseLatent(tape, block.fuse, latent, r.attended);
  r.output = ApplyLinear(tape, block.output, r.latent);
  return r;
}

template <typename T>
DecodeResult<T> DecodeSequence(Tape<T>& tape, const RasModel<T>& model,
                               Var<T> encoded) {
  const ModelConfig& cfg = model.config();
  if (cfg.decoders == 0) throw ConfigError("decode needs at least one block");
  DecodeResult<T> r;
  Var<T> latent = encoded;
  for (std::size_t t = 0; t < cfg.decoders; ++t) {
    Var<T> context = tape.Param(model.contexts()[t]);
    BlockResult<T> b = RasformerBlock(tape, model, t, context, latent);
    latent = b.latent;
    r.latents.push_back(b.latent);
    r.outputs.push_back(b.output);
  }
  r.f_rec = r.outputs.back();
  return r;
}

template <typename T>
ForwardResult<T> Forward(Tape<T>& tape, const RasModel<T>& model,
                         const Tensor<T>& f_org, bool train_mode, Rng* rng,
                         const Tensor<T>* noise) {
  const ModelConfig& cfg = model.config();
  const Shape expected{cfg.c_org, cfg.tokens()};
  if (f_org.shape() != expected) {
    throw ShapeError("forward expects f_org " + ShapeString(expected) +
                     ", got " + ShapeString(f_org.shape()));
  }
  Tensor<T> input = f_org;
  if (train_mode) {
    if (noise) {
      if (noise->shape() != expected) throw ShapeError("noise shape mismatch");
      for (std::size_t i = 0; i < input.size(); ++i) input[i] += (*noise)[i];
    } else if (cfg.alpha_train > 0.0) {
      if (rng == nullptr) throw ContractError("train-mode forward needs an rng");
      input = InjectNoise(f_org, cfg.alpha_train, *rng);
    }
  }
  ForwardResult<T> r;
  r.input = tape.Constant(std::move(input));
  r.encoded = Encode(tape, model, Transpose(r.input));
  DecodeResult<T> d = DecodeSequence(tape, model, r.encoded);
  for (const auto& o : d.outputs) r.outputs.push_back(Transpose(o));
  r.latents = std::move(d.latents);
  r.f_rec = r.outputs.back();
  return r;
}

template <typename T>
Tensor<T> Reconstruct(const RasModel<T>& model, const Tensor<T>& f_org,
                      double test_alpha, Rng* rng) {
  Tape<T> tape(&model.params(), /*track_params=*/false);
  if (test_alpha > 0.0) {
    if (rng == nullptr) throw ContractError("noisy reconstruction needs an rng");
    Tensor<T> noisy = InjectNoise(f_org, test_alpha, *rng);
    return Forward(tape, model, noisy, false, nullptr).f_rec.value();
  }
  return Forward(tape, model, f_org, false, nullptr).f_rec.value();
}

#define RAS_INSTANTIATE(T)                                                    \
  template class RasModel<T>;                                                 \
  template std::vector<double> NoiseStd<T>(const Tensor<T>&, double);         \
  template Tensor<T> InjectNoise<T>(const Tensor<T>&, double, Rng&);          \
  template Var<T> Encode<T>(Tape<T>&, const RasModel<T>&, Var<T>);            \
  template GateResult<T> AdaptiveGate<T>(Tape<T>&, const Linear&, Var<T>,     \
                                         Var<T>);                             \
  template Var<T> FuseLatent<T>(Tape<T>&, const Linear&, Var<T>, Var<T>);     \
  template BlockResult<T> RasformerBlock<T>(Tape<T>&, const RasModel<T>&,     \
                                            std::size_t, Var<T>, Var<T>,      \
                                            const BlockOptions<T>&);          \
  template DecodeResult<T> DecodeSequence<T>(Tape<T>&, const RasModel<T>&,    \
                                             Var<T>);                         \
  template ForwardResult<T> Forward<T>(Tape<T>&, const RasModel<T>&,          \
                                       const Tensor<T>&, bool, Rng*,          \
                                       const Tensor<T>*);                     \
  template Tensor<T> Reconstruct<T>(const RasModel<T>&, const Tensor<T>&,     \
                                    double, Rng*);
RAS_INSTANTIATE(float)
RAS_INSTANTIATE(double)
#undef RAS_INSTANTIATE

}  // namespace ras

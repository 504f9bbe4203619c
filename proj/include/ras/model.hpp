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

#ifndef RAS_MODEL_HPP_
#define RAS_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ras/autodiff.hpp"
#include "ras/nn.hpp"

namespace ras {

// Decoder block variants used by the ablation protocol.
//   kFull            gate, then cross-attention transformer over the gated latent
//   kTransformerOnly the gate is bypassed (l_A = l)
//   kGateOnly        the transformer is replaced by additive fusion l_A + c
enum class Variant { kFull, kGateOnly, kTransformerOnly };

std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);  // ConfigError on unknown names

struct ModelConfig {
  std::size_t c_org = 272;
  std::size_t c_rec = 256;
  std::size_t height = 14;
  std::size_t width = 14;
  std::size_t encoders = 2;
  std::size_t decoders = 4;
  std::size_t num_heads = 8;
  std::size_t ffn_mult = 4;
  double alpha_train = 20.0;
  bool use_encoder_pos_embed = true;
  Variant variant = Variant::kFull;

  std::size_t tokens() const { return height * width; }
  void Validate() const;  // ConfigError

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct DecoderBlock {
  Linear gate;                   // [c_rec x 2 c_rec] with bias
  TransformerLayer transformer;  // queries from the context embedding
  Linear fuse;                   // [c_rec x c_rec], no bias
  Linear output;                 // [c_org x c_rec], no bias, shared by all blocks
};

// Parameter layout and ownership. Internally every sequence is token-major,
// [tokens x channels]; contexts and the positional embedding are stored that
// way too.
template <typename T>
class RasModel {
 public:
  RasModel(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ParamSet<T>& params() { return params_; }
  const ParamSet<T>& params() const { return params_; }

  const Linear& input_proj() const { return input_proj_; }
  const std::optional<ParamId>& pos_embed() const { return pos_embed_; }
  const std::vector<TransformerLayer>& encoders() const { return encoders_; }
  const std::vector<ParamId>& contexts() const { return contexts_; }
  const std::vector<DecoderBlock>& blocks() const { return blocks_; }

  // Parameters that receive gradients under the configured variant; the
  // gate of a transformer-only model, for example, is registered but idle.
  std::vector<ParamId> TrainableParams() const;

 private:
  ModelConfig config_;
  ParamSet<T> params_;
  Linear input_proj_;
  std::optional<ParamId> pos_embed_;
  std::vector<TransformerLayer> encoders_;
  std::vector<ParamId> contexts_;
  std::vector<DecoderBlock> blocks_;
};

// Adds N(0, sigma_i^2) to every channel of position i, where
// sigma_i = alpha * ||f_org[:, i]||_2 / C_org. f_org is [C_org x L]. alpha = 0
// returns the input unchanged and draws nothing.
template <typename T>
Tensor<T> InjectNoise(const Tensor<T>& f_org, double alpha, Rng& rng);

// Per-position standard deviation used by InjectNoise.
template <typename T>
std::vector<double> NoiseStd(const Tensor<T>& f_org, double alpha);

// f_tokens is [L x C_org]; returns o_e as [L x C_rec].
template <typename T>
Var<T> Encode(Tape<T>& tape, const RasModel<T>& model, Var<T> f_tokens);

template <typename T>
struct GateResult {
  Var<T> gate;      // a = sigmoid(W_A (l ++ c))
  Var<T> filtered;  // l_A = a * l
};

template <typename T>
GateResult<T> AdaptiveGate(Tape<T>& tape, const Linear& gate, Var<T> latent,
                           Var<T> context);

// (W l + l_tran) / 2
template <typename T>
Var<T> FuseLatent(Tape<T>& tape, const Linear& fuse, Var<T> latent,
                  Var<T> attended);

template <typename T>
struct BlockOptions {
  // Replaces the gate activation with a constant (test hook).
  std::optional<T> forced_gate;
};

template <typename T>
struct BlockResult {
  Var<T> gate;      // invalid when the variant has no gate
  Var<T> filtered;  // l_A
  Var<T> attended;  // l_Tran
  Var<T> latent;    // l*
  Var<T> output;    // o, [L x C_org]
};

template <typename T>
BlockResult<T> RasformerBlock(Tape<T>& tape, const RasModel<T>& model,
                              std::size_t step, Var<T> context, Var<T> latent,
                              const BlockOptions<T>& options = {});

template <typename T>
struct DecodeResult {
  Var<T> f_rec;                 // [L x C_org]
  std::vector<Var<T>> outputs;  // o_1 .. o_Td
  std::vector<Var<T>> latents;  // l_1 .. l_Td
};

template <typename T>
DecodeResult<T> DecodeSequence(Tape<T>& tape, const RasModel<T>& model,
                               Var<T> encoded);

template <typename T>
struct ForwardResult {
  Var<T> input;                 // (noisy) f_org, [C_org x L]
  Var<T> encoded;               // o_e, [L x C_rec]
  Var<T> f_rec;                 // [C_org x L]
  std::vector<Var<T>> outputs;  // o_t, [C_org x L] each
  std::vector<Var<T>> latents;  // l_t, [L x C_rec]
};

// f_org is [C_org x L]. In train mode noise with alpha_train is drawn from
// `rng` unless `noise` supplies it (added as is). Eval mode never touches rng.
template <typename T>
ForwardResult<T> Forward(Tape<T>& tape, const RasModel<T>& model,
                         const Tensor<T>& f_org, bool train_mode, Rng* rng,
                         const Tensor<T>* noise = nullptr);

// Eval-mode reconstruction without gradient bookkeeping; [C_org x L].
template <typename T>
Tensor<T> Reconstruct(const RasModel<T>& model, const Tensor<T>& f_org,
                      double test_alpha = 0.0, Rng* rng = nullptr);

}  // namespace ras

#endif  // RAS_MODEL_HPP_

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

#ifndef RAS_FEATURES_HPP_
#define RAS_FEATURES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ras/tensor.hpp"

namespace ras {

// Backbone output for one image: levels[k] is [C_k x H_k x W_k], shallow first.
struct MultiLevelFeatures {
  std::vector<Tensor<float>> levels;
  std::string source_id;
  std::size_t image_h = 0;
  std::size_t image_w = 0;

  std::size_t TotalChannels() const;
  // ContractError unless there is at least one rank-3 level and spatial
  // extents never grow with depth.
  void Validate() const;

  friend bool operator==(const MultiLevelFeatures&, const MultiLevelFeatures&) = default;
};

// f_org as a channel-major [C_org x (H*W)] matrix: every level is smoothed by
// a 3x3 average pool, resized bilinearly to target_h x target_w and stacked
// along channels in level order. A zero target means "deepest level extent".
Tensor<float> Assemble(const MultiLevelFeatures& mlf, std::size_t target_h = 0,
                       std::size_t target_w = 0);

// FeatureFile, version 1. All integers and floats little-endian:
//   "RASF" | u16 version | u16 dtype (1 = f32) | u32 n | u32 image_h |
//   u32 image_w | u32 id_len | id bytes | n x (u32 C, u32 H, u32 W) |
//   payload: each level row-major C x H x W as f32
inline constexpr std::uint16_t kFeatureFileVersion = 1;
inline constexpr std::uint16_t kDtypeF32 = 1;

void WriteFeatureFile(const MultiLevelFeatures& mlf, const std::string& path);
MultiLevelFeatures ReadFeatureFile(const std::string& path);

}  // namespace ras

#endif  // RAS_FEATURES_HPP_

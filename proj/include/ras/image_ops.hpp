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

#ifndef RAS_IMAGE_OPS_HPP_
#define RAS_IMAGE_OPS_HPP_

#include <cstddef>
#include <string>

#include "ras/tensor.hpp"

namespace ras {

// All ops take planar [C x H x W] tensors; a rank-2 [H x W] map is treated as
// a single channel and returned with the same rank.

// Stride-1 box filter of odd or even size k. The window at (y, x) spans
// offsets [-k/2, k - 1 - k/2] and averages only the in-bounds samples, so
// constants are preserved at the borders.
Tensor<float> BoxFilter(const Tensor<float>& planes, std::size_t k);

// Bilinear resampling with half-pixel centres (align_corners = false).
Tensor<float> BilinearResize(const Tensor<float>& planes, std::size_t out_h,
                             std::size_t out_w);

// Binary PGM (P5) with values clamped to [0, 1] and scaled to 0..255.
void WritePgm(const Tensor<float>& map, const std::string& path);
Tensor<float> ReadPgm(const std::string& path);

// Binary PPM (P6) from an interleaved [H x W x 3] byte tensor.
void WritePpm(const Tensor<unsigned char>& rgb, const std::string& path);

}  // namespace ras

#endif  // RAS_IMAGE_OPS_HPP_

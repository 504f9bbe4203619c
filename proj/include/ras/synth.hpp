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

#ifndef RAS_SYNTH_HPP_
#define RAS_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ras/features.hpp"
#include "ras/tensor.hpp"

namespace ras {

enum class Split { kTrain, kTest };
const char* SplitName(Split split);

enum class Injector { kPatchSwap, kIntensityBlob, kScratchLine };
const char* InjectorName(Injector injector);

// Procedural texture benchmark. Class c renders texture family c % 3
// (grating, checkerboard, blob field) with per-class period, orientation,
// phase and contrast, plus a black and white bullseye marker at a per-class spot.
// Images add small phase and marker jitter and sensor noise; blob fields
// re-draw their lattice jitter per image.
struct SyntheticSpec {
  std::size_t num_classes = 3;
  std::size_t train_per_class = 100;
  std::size_t test_normal_per_class = 20;
  std::size_t test_anomalous_per_class = 20;
  std::size_t image_size = 128;
  double pixel_noise = 0.03;
  double marker_radius = 20;  // bullseye radius; 0 disables the marker
  double marker_width = 6;    // ring width
  double blob_radius_min = 10, blob_radius_max = 18;
  double patch_min = 24, patch_max = 40;
  double scratch_length_min = 48, scratch_length_max = 96;
  double scratch_width = 4;
  double contrast_min = 0.3, contrast_max = 0.5;
  std::uint64_t seed = 0;

  // ConfigError for empty classes or anomalies that cannot fit in the image.
  void Validate() const;
};

struct SynthSample {
  std::string id;
  std::size_t class_id = 0;
  bool anomalous = false;
  std::string injector;  // empty for normal samples
  Tensor<float> image;   // [1 x S x S], values in [0, 1]
  Tensor<float> mask;    // [S x S], 1 inside the anomaly
};

// Deterministic in (spec, split). Test samples list normals before anomalies
// within each class.
std::vector<SynthSample> SynthGenerate(const SyntheticSpec& spec, Split split);

// Renders one anomaly-free image of a class; exposed so injectors can be
// tested against the clean texture.
Tensor<float> RenderTexture(const SyntheticSpec& spec, std::size_t class_id,
                            std::uint64_t image_seed);

// Applies an injector in place and returns its mask.
Tensor<float> InjectAnomaly(const SyntheticSpec& spec, Injector injector,
                            std::size_t class_id, std::uint64_t image_seed,
                            Tensor<float>& image);

// Frozen random filter bank standing in for a pretrained backbone. The image
// is first standardised, (v - kInputMean) / kInputStd; each level is then
// |conv3x3(prev)| with stride 2 and zero padding 1, so extents halve.
struct FilterBank {
  std::vector<std::size_t> channels;
  std::vector<Tensor<float>> kernels;  // [C_out x C_in x 3 x 3] flattened to rank 4

  static FilterBank Make(std::vector<std::size_t> channels, std::uint64_t seed);
};

inline constexpr std::uint64_t kDefaultBankSeed = 0x5EEDBA4Cull;
inline constexpr float kInputMean = 0.5f;
inline constexpr float kInputStd = 0.25f;
FilterBank DefaultFilterBank();

MultiLevelFeatures SynthFeatures(const Tensor<float>& image, const FilterBank& bank,
                                 const std::string& source_id = "");

}  // namespace ras

#endif  // RAS_SYNTH_HPP_

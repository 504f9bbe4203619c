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

#ifndef RAS_DATASET_HPP_
#define RAS_DATASET_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "ras/synth.hpp"
#include "ras/tensor.hpp"

namespace ras {

// One manifest line: split, class, feature path, label, mask path ("-").
struct ManifestEntry {
  std::string split;
  std::string class_id;
  std::string path;
  bool anomalous = false;
  std::string mask_path;  // empty when absent

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::string base_dir;  // relative paths resolve against this

  std::vector<const ManifestEntry*> Split(const std::string& split) const;
  std::vector<std::string> ClassIds() const;  // sorted, unique
  std::string Resolve(const std::string& path) const;
  // ContractError if the train split holds an anomalous entry.
  void Validate() const;
};

// Tab-separated; blank lines and lines starting with '#' are skipped.
Manifest ParseManifest(const std::string& text, const std::string& base_dir);
Manifest ReadManifest(const std::string& path);
std::string FormatManifest(const Manifest& manifest);
void WriteManifest(const Manifest& manifest, const std::string& path);

// A manifest entry loaded and assembled for the model.
struct Sample {
  std::string id;
  std::string class_id;
  bool anomalous = false;
  Tensor<float> f_org;  // [C_org x (H*W)]
  Tensor<float> mask;   // [H_img x W_img], empty if the entry has none
  std::size_t grid_h = 0, grid_w = 0;
  std::size_t image_h = 0, image_w = 0;
};

// Loads every entry of `split` in manifest order. A zero grid means the
// deepest level's extent.
std::vector<Sample> LoadSplit(const Manifest& manifest, const std::string& split,
                              std::size_t grid_h = 0, std::size_t grid_w = 0);

// Renders the benchmark, runs the filter bank and writes feature files,
// masks, images and manifest.tsv under out_dir. Returns the manifest path.
std::string WriteSyntheticDataset(const SyntheticSpec& spec, const FilterBank& bank,
                                  const std::string& out_dir);

}  // namespace ras

#endif  // RAS_DATASET_HPP_

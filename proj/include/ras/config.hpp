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

#ifndef RAS_CONFIG_HPP_
#define RAS_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ras/model.hpp"
#include "ras/synth.hpp"

namespace ras {

struct AdamWConfig {
  double lr = 7e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;

  friend bool operator==(const AdamWConfig&, const AdamWConfig&) = default;
};

// Everything a run needs besides the data. c_org, height and width of the
// model are zero until the first sample fixes them.
struct RunConfig {
  ModelConfig model = DataDerived();
  AdamWConfig optim;
  std::size_t batch_size = 16;
  std::size_t epochs = 50;
  std::uint64_t seed = 0;
  std::size_t grid_h = 0;  // 0: extent of the deepest feature level
  std::size_t grid_w = 0;
  std::size_t score_pool = 8;  // image score box-filter size
  std::string manifest;

  void Validate() const;  // ConfigError
  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  static ModelConfig DataDerived() {
    ModelConfig m;
    m.c_org = m.height = m.width = 0;
    return m;
  }
};

// Every recognised key, in serialisation order.
const std::vector<std::string>& ConfigKeys();

// Sets one key; ConfigError for unknown keys or unparsable values.
void SetConfigValue(RunConfig& config, const std::string& key, const std::string& value);

// key=value lines; '#' starts a comment, blank lines are ignored.
void ApplyConfigText(RunConfig& config, const std::string& text);
RunConfig ReadConfigFile(const std::string& path);

// Round-trips exactly through ApplyConfigText.
std::string FormatConfig(const RunConfig& config);

// Same key=value conventions for the synthetic benchmark description.
const std::vector<std::string>& SpecKeys();
void SetSpecValue(SyntheticSpec& spec, const std::string& key, const std::string& value);
void ApplySpecText(SyntheticSpec& spec, const std::string& text);
std::string FormatSpec(const SyntheticSpec& spec);

}  // namespace ras

#endif  // RAS_CONFIG_HPP_

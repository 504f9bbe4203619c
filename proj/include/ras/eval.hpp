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

#ifndef RAS_EVAL_HPP_
#define RAS_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ras/config.hpp"
#include "ras/dataset.hpp"
#include "ras/model.hpp"
#include "ras/tensor.hpp"

namespace ras {

struct AnomalyMap {
  Tensor<float> token_map;  // [H x W] L2 norm per token
  Tensor<float> pixel_map;  // [H_img x W_img], bilinear upsample of token_map
  double image_score = 0;   // max of the box-filtered pixel_map
  std::string source_id;
};

// f_org and f_rec are [C_org x (H*W)]. ShapeError on mismatch.
template <typename T>
AnomalyMap ComputeAnomalyMap(const Tensor<T>& f_org, const Tensor<T>& f_rec,
                             std::size_t grid_h, std::size_t grid_w,
                             std::size_t image_h, std::size_t image_w,
                             std::size_t score_pool = 8);

// Mann-Whitney AUROC with ties worth one half, in O(n log n). labels are 0
// (normal) or 1 (anomalous). MetricError unless both classes are present.
double Auroc(const std::vector<double>& scores, const std::vector<int>& labels);

struct ClassMetrics {
  double image_auroc = -1;  // -1 when the class lacks one of the labels
  double pixel_auroc = -1;
  std::size_t samples = 0;

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

// Headline AUROCs are means over the classes whose test split holds both
// labels; the pooled_* fields rank every class together.
struct EvalReport {
  double image_auroc = 0;
  double pixel_auroc = -1;  // -1 when not requested
  double pooled_image_auroc = 0;
  double pooled_pixel_auroc = -1;
  std::map<std::string, ClassMetrics> per_class;
  double alpha = 0;
  std::string variant;
  std::size_t encoders = 0;
  std::size_t decoders = 0;
  std::size_t samples = 0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Header line plus one row per class, a "mean" row and a "pooled" row.
std::string FormatReportTsv(const EvalReport& report);
// One key=value per line; doubles printed with 17 significant digits.
std::string FormatReportKeyValues(const EvalReport& report);

struct EvalOptions {
  double alpha = 0;               // test-time noise intensity
  std::uint64_t noise_seed = 0;   // used only when alpha > 0
  bool pixel_metrics = true;
  std::size_t score_pool = 8;
};

// Scores every test sample. Per class, image AUROC ranks image scores and
// pixel AUROC ranks every pixel of the class. ContractError when pixel
// metrics are requested and a sample has no mask.
template <typename T>
EvalReport Evaluate(const RasModel<T>& model, const std::vector<Sample>& test,
                    const EvalOptions& options = {},
                    std::vector<AnomalyMap>* maps = nullptr);

// Train a fresh model on `train` under `config` and evaluate it on `test`.
// config.model extents are filled in from the data.
struct Experiment {
  RunConfig config;
  std::vector<Sample> train;
  std::vector<Sample> test;
};

RunConfig WithDataExtents(RunConfig config, const std::vector<Sample>& samples);

template <typename T>
RasModel<T> TrainModel(const RunConfig& config, const std::vector<Sample>& train);

EvalReport AblationRun(const Experiment& ex, Variant variant);

struct DepthCell {
  std::size_t encoders;
  std::size_t decoders;
  EvalReport report;
};
std::vector<DepthCell> DepthSweep(const Experiment& ex, const std::vector<std::size_t>& encoders,
                                  const std::vector<std::size_t>& decoders);

inline const std::vector<double> kDefaultNoiseAlphas = {0, 10, 20, 30, 40, 50};
std::vector<EvalReport> NoiseSweep(const RasModel<float>& model, const std::vector<Sample>& test,
                                   const std::vector<double>& alphas, std::uint64_t noise_seed,
                                   std::size_t score_pool = 8);

// P6 heatmap of `map` min-max normalised onto a blue-to-red ramp.
void RenderHeatmap(const Tensor<float>& map, const std::string& path);

// Writes <prefix>_step<t>.ppm for t = 2..T_d from ||o_t - o_{t-1}|| per
// token, upsampled to the image size. outputs are [C_org x (H*W)].
std::vector<std::string> RenderStepMaps(const std::vector<Tensor<float>>& outputs,
                                        std::size_t grid_h, std::size_t grid_w,
                                        std::size_t image_h, std::size_t image_w,
                                        const std::string& prefix);

}  // namespace ras

#endif  // RAS_EVAL_HPP_

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

#include "ras/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "gtest/gtest.h"
#include "ras/image_ops.hpp"
#include "test_util.hpp"

namespace ras {
namespace {

namespace fs = std::filesystem;
using testing::RandomTensor;

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ras_eval_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

// Pairwise oracle in half units, mirroring the definition of AUROC.
double BruteForceAuroc(const std::vector<double>& s, const std::vector<int>& y) {
  std::uint64_t twice = 0, pos = 0, neg = 0;
  for (int l : y) (l ? pos : neg) += 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] == 1 && y[j] == 0) twice += s[i] > s[j] ? 2 : (s[i] == s[j] ? 1 : 0);
  return static_cast<double>(twice) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

TEST(AnomalyMapTest, PerfectReconstructionScoresZero) {
  std::mt19937_64 gen(1);
  const auto f = RandomTensor<double>({5, 6}, gen);
  const AnomalyMap m = ComputeAnomalyMap(f, f, 2, 3, 8, 12);
  for (float v : m.pixel_map.values()) EXPECT_EQ(v, 0.0f);
  EXPECT_EQ(m.image_score, 0.0);
  EXPECT_EQ(m.pixel_map.shape(), (Shape{8, 12}));
}

TEST(AnomalyMapTest, SingleTokenScoreIsL2NormOfDifference) {
  Tensor<double> f({3, 4}, 0.5), r = f;
  const double v[3] = {3, -4, 12};
  for (std::size_t c = 0; c < 3; ++c) r.at(c, 2) += v[c];
  const AnomalyMap m = ComputeAnomalyMap(f, r, 2, 2, 2, 2);
  EXPECT_NEAR(m.token_map[2], 13.0, 1e-6);
  EXPECT_EQ(m.token_map[0], 0.0f);
  EXPECT_EQ(m.pixel_map, m.token_map);
}

TEST(AnomalyMapTest, InvariantToJointChannelPermutation) {
  std::mt19937_64 gen(2);
  const auto f = RandomTensor<double>({6, 4}, gen), r = RandomTensor<double>({6, 4}, gen);
  const std::size_t perm[6] = {3, 0, 5, 1, 4, 2};
  Tensor<double> fp({6, 4}), rp({6, 4});
  for (std::size_t c = 0; c < 6; ++c)
    for (std::size_t i = 0; i < 4; ++i) {
      fp.at(c, i) = f.at(perm[c], i);
      rp.at(c, i) = r.at(perm[c], i);
    }
  const AnomalyMap a = ComputeAnomalyMap(f, r, 2, 2, 8, 8);
  const AnomalyMap b = ComputeAnomalyMap(fp, rp, 2, 2, 8, 8);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(a.token_map[i], b.token_map[i], 1e-6);
}

TEST(AnomalyMapTest, ScoreIsMaxOfPooledPixelMap) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = RandomTensor<float>({4, 9}, gen), r = RandomTensor<float>({4, 9}, gen);
    const AnomalyMap m = ComputeAnomalyMap(f, r, 3, 3, 24, 24, 8);
    for (float v : m.pixel_map.values()) EXPECT_GE(v, 0.0f);
    const Tensor<float> pooled = BoxFilter(m.pixel_map, 8);
    EXPECT_EQ(m.image_score, *std::max_element(pooled.storage().begin(), pooled.storage().end()));
    EXPECT_GT(m.image_score, 0.0);
  }
}

TEST(AnomalyMapTest, ShapeMismatchIsShapeError) {
  EXPECT_THROW(ComputeAnomalyMap(Tensor<float>({2, 4}), Tensor<float>({2, 3}), 2, 2, 4, 4),
               ShapeError);
  EXPECT_THROW(ComputeAnomalyMap(Tensor<float>({2, 4}), Tensor<float>({2, 4}), 3, 3, 4, 4),
               ShapeError);
}

TEST(AurocTest, HandExamples) {
  EXPECT_EQ(Auroc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}), 1.0);
  EXPECT_EQ(Auroc({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}), 0.0);
  EXPECT_EQ(Auroc({0.3, 0.3, 0.3, 0.3, 0.3}, {0, 1, 0, 1, 1}), 0.5);
  EXPECT_EQ(Auroc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}), 0.75);
}

TEST(AurocTest, InvalidInputsAreMetricErrors) {
  EXPECT_THROW(Auroc({0.1, 0.2}, {1, 1}), MetricError);
  EXPECT_THROW(Auroc({0.1, 0.2}, {0, 0}), MetricError);
  EXPECT_THROW(Auroc({0.1}, {0, 1}), MetricError);
  EXPECT_THROW(Auroc({0.1, 0.2}, {0, 2}), MetricError);
  EXPECT_THROW(Auroc({0.1, std::nan("")}, {0, 1}), MetricError);
}

TEST(AurocTest, EqualsPairwiseOracleWithTies) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 199;
    const int levels = 1 + static_cast<int>(gen() % 12);  // few levels force ties
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(gen() % levels) / levels;
      y[i] = static_cast<int>(gen() % 2);
    }
    y[0] = 0;
    y[1] = 1;
    ASSERT_EQ(Auroc(s, y), BruteForceAuroc(s, y)) << "trial " << trial;
  }
}

TEST(AurocTest, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(60), t(60);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
      s[i] = std::round(dist(gen) * 4) / 4;
      t[i] = std::exp(3 * s[i]) - 7;
      y[i] = static_cast<int>(i % 2);
    }
    EXPECT_EQ(Auroc(s, y), Auroc(t, y));
  }
}

ModelConfig SmallModel() {
  ModelConfig m;
  m.c_org = 4;
  m.c_rec = 8;
  m.height = 2;
  m.width = 2;
  m.encoders = 1;
  m.decoders = 2;
  m.num_heads = 2;
  m.ffn_mult = 2;
  return m;
}

std::vector<Sample> SmallTestSet(std::uint64_t seed, bool with_masks = true) {
  std::mt19937_64 gen(seed);
  std::vector<Sample> out;
  for (int i = 0; i < 8; ++i) {
    Sample s;
    s.id = "s" + std::to_string(i);
    s.class_id = std::to_string(i % 2);
    s.anomalous = i >= 4;
    s.f_org = RandomTensor<float>({4, 4}, gen);
    s.grid_h = s.grid_w = 2;
    s.image_h = s.image_w = 8;
    if (with_masks) {
      s.mask = Tensor<float>({8, 8});
      if (s.anomalous)
        for (std::size_t k = 0; k < 16; ++k) s.mask[k] = 1;
    }
    out.push_back(std::move(s));
  }
  return out;
}

TEST(EvaluateTest, DeterministicAtZeroAlpha) {
  const RasModel<float> model(SmallModel(), 1);
  const auto test = SmallTestSet(2);
  const EvalReport a = Evaluate(model, test), b = Evaluate(model, test);
  EXPECT_EQ(a, b);
  EXPECT_EQ(FormatReportKeyValues(a), FormatReportKeyValues(b));
  EXPECT_GE(a.image_auroc, 0.0);
  EXPECT_LE(a.image_auroc, 1.0);
  EXPECT_GE(a.pixel_auroc, 0.0);
  EXPECT_LE(a.pixel_auroc, 1.0);
  EXPECT_EQ(a.per_class.size(), 2u);
  EXPECT_EQ(a.samples, 8u);
}

TEST(EvaluateTest, HeadlineIsMeanOfClassesAndPooledRanksAllMaps) {
  const RasModel<float> model(SmallModel(), 1);
  const auto test = SmallTestSet(7);
  std::vector<AnomalyMap> maps;
  const EvalReport r = Evaluate(model, test, {}, &maps);
  double image = 0, pixel = 0;
  for (const auto& [cls, m] : r.per_class) {
    image += m.image_auroc;
    pixel += m.pixel_auroc;
  }
  EXPECT_DOUBLE_EQ(r.image_auroc, image / 2);
  EXPECT_DOUBLE_EQ(r.pixel_auroc, pixel / 2);
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t i = 0; i < test.size(); ++i) {
    scores.push_back(maps[i].image_score);
    labels.push_back(test[i].anomalous);
  }
  EXPECT_EQ(r.pooled_image_auroc, Auroc(scores, labels));
}

TEST(EvaluateTest, NoiseSeedControlsTestTimeNoise) {
  const RasModel<float> model(SmallModel(), 1);
  const auto test = SmallTestSet(3);
  EvalOptions noisy{.alpha = 30, .noise_seed = 4};
  std::vector<AnomalyMap> m1, m2, m0;
  EXPECT_EQ(Evaluate(model, test, noisy, &m1), Evaluate(model, test, noisy, &m2));
  Evaluate(model, test, {}, &m0);
  EXPECT_EQ(m1[0].pixel_map, m2[0].pixel_map);
  EXPECT_NE(m1[0].pixel_map, m0[0].pixel_map);
}

TEST(EvaluateTest, MissingMasksAreContractErrors) {
  const RasModel<float> model(SmallModel(), 1);
  const auto test = SmallTestSet(5, false);
  EXPECT_THROW(Evaluate(model, test), ContractError);
  EvalOptions image_only;
  image_only.pixel_metrics = false;
  const EvalReport r = Evaluate(model, test, image_only);
  EXPECT_EQ(r.pixel_auroc, -1.0);
}

TEST(EvaluateTest, TransformerOnlyReportIgnoresGateWeights) {
  ModelConfig cfg = SmallModel();
  cfg.variant = Variant::kTransformerOnly;
  RasModel<float> model(cfg, 1);
  const auto test = SmallTestSet(6);
  const EvalReport before = Evaluate(model, test);
  std::mt19937_64 gen(7);
  for (const auto& b : model.blocks())
    for (ParamId id : LayerParamIds(b.gate))
      model.params()[id].value = RandomTensor<float>(model.params()[id].value.shape(), gen, 5);
  EXPECT_EQ(Evaluate(model, test), before);
}

TEST(EvaluateTest, ReportSerialisations) {
  const RasModel<float> model(SmallModel(), 1);
  const EvalReport r = Evaluate(model, SmallTestSet(8));
  const std::string kv = FormatReportKeyValues(r);
  for (const char* key : {"image_auroc=", "pixel_auroc=", "alpha=0\n", "variant=full\n",
                          "encoders=1\n", "decoders=2\n", "class.0.image_auroc=", "class.1.samples=4\n"})
    EXPECT_NE(kv.find(key), std::string::npos) << key;
  const std::string tsv = FormatReportTsv(r);
  EXPECT_NE(tsv.find("class\tsamples\timage_auroc\tpixel_auroc\n"), std::string::npos);
  EXPECT_NE(tsv.find("\nmean\t8\t"), std::string::npos);
  EXPECT_NE(tsv.find("\npooled\t8\t"), std::string::npos);
}

TEST(ProtocolTest, DepthSweepGridShape) {
  Experiment ex;
  ex.config.model.c_rec = 8;
  ex.config.model.num_heads = 2;
  ex.config.model.ffn_mult = 1;
  ex.config.epochs = 1;
  ex.config.batch_size = 4;
  ex.test = SmallTestSet(9);
  for (const Sample& s : ex.test)
    if (!s.anomalous) ex.train.push_back(s);
  const auto grid = DepthSweep(ex, {0, 1, 2}, {1, 2, 3, 4});
  ASSERT_EQ(grid.size(), 12u);
  EXPECT_EQ(grid[0].encoders, 0u);
  EXPECT_EQ(grid[0].decoders, 1u);
  EXPECT_EQ(grid[11].encoders, 2u);
  EXPECT_EQ(grid[11].decoders, 4u);
  EXPECT_EQ(grid[11].report.decoders, 4u);
}

TEST(ProtocolTest, TrainingRejectsAnomalousSamples) {
  Experiment ex;
  ex.config.model.c_rec = 8;
  ex.config.model.num_heads = 2;
  ex.config.epochs = 1;
  ex.train = SmallTestSet(10);
  ex.test = ex.train;
  EXPECT_THROW(AblationRun(ex, Variant::kFull), ContractError);
}

TEST(ProtocolTest, NoiseSweepDefaultsAndZeroAlphaMatchesEvaluate) {
  EXPECT_EQ(kDefaultNoiseAlphas, (std::vector<double>{0, 10, 20, 30, 40, 50}));
  const RasModel<float> model(SmallModel(), 1);
  const auto test = SmallTestSet(11);
  const auto sweep = NoiseSweep(model, test, kDefaultNoiseAlphas, 3);
  ASSERT_EQ(sweep.size(), 6u);
  EXPECT_EQ(sweep[0], Evaluate(model, test));
  EXPECT_EQ(sweep[5].alpha, 50.0);
}

TEST(HeatmapTest, GoldenFixtureIsByteExact) {
  Tensor<float> map({4, 4});
  for (std::size_t i = 0; i < 16; ++i) map[i] = static_cast<float>(i * i);
  const fs::path dir = TempDir("golden");
  RenderHeatmap(map, (dir / "h.ppm").string());
  EXPECT_EQ(Slurp(dir / "h.ppm"), Slurp("data/golden_heatmap.ppm"));
}

TEST(HeatmapTest, ConstantMapIsUniformAndSizesMatch) {
  const fs::path dir = TempDir("constant");
  RenderHeatmap(Tensor<float>({3, 5}, 2.0f), (dir / "c.ppm").string());
  const std::string bytes = Slurp(dir / "c.ppm");
  const std::string header = "P6\n5 3\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 45);
  EXPECT_EQ(bytes.substr(0, header.size()), header);
  for (std::size_t i = header.size(); i < bytes.size(); i += 3)
    EXPECT_EQ(bytes.substr(i, 3), bytes.substr(header.size(), 3));
  EXPECT_THROW(RenderHeatmap(Tensor<float>({2, 2}), (dir / "no/such/dir.ppm").string()), IoError);
}

TEST(HeatmapTest, StepMapsCoverEveryTransition) {
  std::mt19937_64 gen(12);
  std::vector<Tensor<float>> outputs;
  for (int t = 0; t < 4; ++t) outputs.push_back(RandomTensor<float>({3, 4}, gen));
  const fs::path dir = TempDir("steps");
  const auto paths = RenderStepMaps(outputs, 2, 2, 6, 6, (dir / "s").string());
  ASSERT_EQ(paths.size(), 3u);
  EXPECT_EQ(fs::path(paths[0]).filename(), "s_step2.ppm");
  for (const auto& p : paths) EXPECT_EQ(Slurp(p).substr(0, 11), "P6\n6 6\n255\n");
}

}  // namespace
}  // namespace ras

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
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include "ras/image_ops.hpp"
#include "ras/train.hpp"

namespace ras {
namespace {

std::string Real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Short(double v) {
  if (v < 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// Parallel map over samples with results stored by index.
template <typename F>
void ForEachIndex(std::size_t n, F&& fn) {
  const std::size_t threads = std::min(WorkerThreads(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
}

bool HasBothLabels(const std::vector<int>& labels) {
  bool pos = false, neg = false;
  for (int l : labels) (l ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

template <typename T>
AnomalyMap ComputeAnomalyMap(const Tensor<T>& f_org, const Tensor<T>& f_rec,
                             std::size_t grid_h, std::size_t grid_w,
                             std::size_t image_h, std::size_t image_w,
                             std::size_t score_pool) {
  if (f_org.shape() != f_rec.shape() || f_org.rank() != 2) {
    throw ShapeError("anomaly map operands differ: " + ShapeString(f_org.shape()) + " vs " +
                     ShapeString(f_rec.shape()));
  }
  if (f_org.cols() != grid_h * grid_w) {
    throw ShapeError("feature map has " + std::to_string(f_org.cols()) + " tokens, grid is " +
                     std::to_string(grid_h) + "x" + std::to_string(grid_w));
  }
  AnomalyMap out;
  out.token_map = Tensor<float>({grid_h, grid_w});
  const std::size_t c = f_org.rows(), l = f_org.cols();
  for (std::size_t i = 0; i < l; ++i) {
    double sq = 0;
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double d = static_cast<double>(f_org.at(ch, i)) - static_cast<double>(f_rec.at(ch, i));
      sq += d * d;
    }
    out.token_map[i] = static_cast<float>(std::sqrt(sq));
  }
  out.pixel_map = BilinearResize(out.token_map, image_h, image_w);
  const Tensor<float> pooled = BoxFilter(out.pixel_map, score_pool);
  float best = 0;
  for (float v : pooled.values()) best = std::max(best, v);
  out.image_score = best;
  return out;
}

double Auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw MetricError("scores and labels differ in length");
  std::uint64_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw MetricError("labels must be 0 or 1");
    if (std::isnan(scores[i])) throw MetricError("NaN score");
    (labels[i] ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) throw MetricError("AUROC needs both normal and anomalous samples");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Twice the Mann-Whitney U, kept integral: each positive beats every
  // lower-scored negative (2 units) and ties with equal-scored ones (1 unit).
  std::uint64_t twice_u = 0, negatives_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t p = 0, n = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? p : n) += 1;
      ++j;
    }
    twice_u += 2 * p * negatives_below + p * n;
    negatives_below += n;
    i = j;
  }
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

std::string FormatReportTsv(const EvalReport& r) {
  std::ostringstream os;
  os << "# alpha=" << Real(r.alpha) << " variant=" << r.variant << " encoders=" << r.encoders
     << " decoders=" << r.decoders << "\n";
  os << "class\tsamples\timage_auroc\tpixel_auroc\n";
  for (const auto& [cls, m] : r.per_class)
    os << cls << '\t' << m.samples << '\t' << Short(m.image_auroc) << '\t'
       << Short(m.pixel_auroc) << '\n';
  os << "mean\t" << r.samples << '\t' << Short(r.image_auroc) << '\t' << Short(r.pixel_auroc)
     << '\n';
  os << "pooled\t" << r.samples << '\t' << Short(r.pooled_image_auroc) << '\t'
     << Short(r.pooled_pixel_auroc) << '\n';
  return os.str();
}

std::string FormatReportKeyValues(const EvalReport& r) {
  std::ostringstream os;
  os << "image_auroc=" << Real(r.image_auroc) << "\n";
  os << "pixel_auroc=" << Real(r.pixel_auroc) << "\n";
  os << "pooled_image_auroc=" << Real(r.pooled_image_auroc) << "\n";
  os << "pooled_pixel_auroc=" << Real(r.pooled_pixel_auroc) << "\n";
  os << "alpha=" << Real(r.alpha) << "\n";
  os << "variant=" << r.variant << "\n";
  os << "encoders=" << r.encoders << "\n";
  os << "decoders=" << r.decoders << "\n";
  os << "samples=" << r.samples << "\n";
  for (const auto& [cls, m] : r.per_class) {
    os << "class." << cls << ".samples=" << m.samples << "\n";
    os << "class." << cls << ".image_auroc=" << Real(m.image_auroc) << "\n";
    os << "class." << cls << ".pixel_auroc=" << Real(m.pixel_auroc) << "\n";
  }
  return os.str();
}

template <typename T>
EvalReport Evaluate(const RasModel<T>& model, const std::vector<Sample>& test,
                    const EvalOptions& options, std::vector<AnomalyMap>* maps) {
  if (test.empty()) throw ContractError("no test samples");
  if (options.alpha < 0) throw ConfigError("test alpha must be >= 0");
  if (options.pixel_metrics) {
    for (const auto& s : test)
      if (s.mask.empty()) throw ContractError("pixel AUROC needs a mask for " + s.id);
  }
  // Noise is drawn up front in sample order so threads cannot reorder it.
  std::vector<Tensor<T>> clean(test.size()), inputs(test.size());
  Rng rng(options.noise_seed);
  for (std::size_t i = 0; i < test.size(); ++i) {
    clean[i] = test[i].f_org.Cast<T>();
    inputs[i] = InjectNoise(clean[i], options.alpha, rng);
  }
  std::vector<AnomalyMap> local(test.size());
  ForEachIndex(test.size(), [&](std::size_t i) {
    const Sample& s = test[i];
    local[i] = ComputeAnomalyMap(clean[i], Reconstruct(model, inputs[i]), s.grid_h, s.grid_w,
                                 s.image_h, s.image_w, options.score_pool);
    local[i].source_id = s.id;
  });

  EvalReport report;
  report.alpha = options.alpha;
  report.variant = VariantName(model.config().variant);
  report.encoders = model.config().encoders;
  report.decoders = model.config().decoders;
  report.samples = test.size();

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < test.size(); ++i) by_class[test[i].class_id].push_back(i);
  auto metrics = [&](const std::vector<std::size_t>& idx, double& image, double& pixel) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (std::size_t i : idx) {
      scores.push_back(local[i].image_score);
      labels.push_back(test[i].anomalous ? 1 : 0);
    }
    if (HasBothLabels(labels)) image = Auroc(scores, labels);
    if (!options.pixel_metrics) return;
    std::vector<double> px;
    std::vector<int> pl;
    for (std::size_t i : idx) {
      const Tensor<float>& map = local[i].pixel_map;
      const Tensor<float>& mask = test[i].mask;
      if (mask.shape() != map.shape()) throw ShapeError("mask does not match the image for " + test[i].id);
      for (std::size_t k = 0; k < map.size(); ++k) {
        px.push_back(map[k]);
        pl.push_back(mask[k] > 0.5f ? 1 : 0);
      }
    }
    if (HasBothLabels(pl)) pixel = Auroc(px, pl);
  };
  std::vector<std::size_t> all(test.size());
  std::iota(all.begin(), all.end(), 0);
  double image = -1, pixel = -1;
  metrics(all, image, pixel);
  if (image < 0) throw MetricError("test split needs both normal and anomalous samples");
  report.pooled_image_auroc = image;
  report.pooled_pixel_auroc = pixel;
  double image_sum = 0, pixel_sum = 0;
  std::size_t image_n = 0, pixel_n = 0;
  for (const auto& [cls, idx] : by_class) {
    ClassMetrics m;
    m.samples = idx.size();
    metrics(idx, m.image_auroc, m.pixel_auroc);
    report.per_class[cls] = m;
    if (m.image_auroc >= 0) {
      image_sum += m.image_auroc;
      ++image_n;
    }
    if (m.pixel_auroc >= 0) {
      pixel_sum += m.pixel_auroc;
      ++pixel_n;
    }
  }
  if (image_n == 0) throw MetricError("no class has both normal and anomalous samples");
  report.image_auroc = image_sum / static_cast<double>(image_n);
  report.pixel_auroc = pixel_n ? pixel_sum / static_cast<double>(pixel_n) : -1;
  if (maps) *maps = std::move(local);
  return report;
}

RunConfig WithDataExtents(RunConfig config, const std::vector<Sample>& samples) {
  if (samples.empty()) throw ContractError("no samples to size the model from");
  const Sample& s = samples.front();
  auto fill = [](std::size_t& field, std::size_t value, const char* name) {
    if (field != 0 && field != value) {
      throw ConfigError(std::string(name) + "=" + std::to_string(field) +
                        " disagrees with the data (" + std::to_string(value) + ")");
    }
    field = value;
  };
  fill(config.model.c_org, s.f_org.rows(), "c_org");
  fill(config.model.height, s.grid_h, "height");
  fill(config.model.width, s.grid_w, "width");
  for (const Sample& other : samples) {
    if (other.f_org.shape() != s.f_org.shape()) {
      throw ContractError("samples disagree in feature shape: " + other.id);
    }
  }
  return config;
}

template <typename T>
RasModel<T> TrainModel(const RunConfig& config, const std::vector<Sample>& train) {
  for (const Sample& s : train)
    if (s.anomalous) throw ContractError("anomalous sample in the train split: " + s.id);
  const RunConfig sized = WithDataExtents(config, train);
  std::vector<Tensor<T>> data;
  data.reserve(train.size());
  for (const Sample& s : train) data.push_back(s.f_org.Cast<T>());
  Trainer<T> trainer(sized);
  trainer.Fit(data);
  return trainer.model();
}

EvalReport AblationRun(const Experiment& ex, Variant variant) {
  RunConfig config = ex.config;
  config.model.variant = variant;
  const RasModel<float> model = TrainModel<float>(config, ex.train);
  return Evaluate(model, ex.test, {.score_pool = config.score_pool});
}

std::vector<DepthCell> DepthSweep(const Experiment& ex, const std::vector<std::size_t>& encoders,
                                  const std::vector<std::size_t>& decoders) {
  std::vector<DepthCell> grid;
  for (std::size_t te : encoders)
    for (std::size_t td : decoders) {
      RunConfig config = ex.config;
      config.model.encoders = te;
      config.model.decoders = td;
      const RasModel<float> model = TrainModel<float>(config, ex.train);
      grid.push_back({te, td, Evaluate(model, ex.test, {.score_pool = config.score_pool})});
    }
  return grid;
}

std::vector<EvalReport> NoiseSweep(const RasModel<float>& model, const std::vector<Sample>& test,
                                   const std::vector<double>& alphas, std::uint64_t noise_seed,
                                   std::size_t score_pool) {
  std::vector<EvalReport> out;
  for (double alpha : alphas) {
    EvalOptions options;
    options.alpha = alpha;
    options.noise_seed = noise_seed;
    options.score_pool = score_pool;
    out.push_back(Evaluate(model, test, options));
  }
  return out;
}

void RenderHeatmap(const Tensor<float>& map, const std::string& path) {
  if (map.rank() != 2) throw ShapeError("heatmap needs an [H x W] map");
  float lo = 0, hi = 0;
  if (!map.empty()) {
    const auto [mn, mx] = std::minmax_element(map.storage().begin(), map.storage().end());
    lo = *mn;
    hi = *mx;
  }
  Tensor<unsigned char> rgb({map.dim(0), map.dim(1), 3});
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double s = hi > lo ? (map[i] - lo) / (static_cast<double>(hi) - lo) : 0.0;
    rgb[3 * i + 0] = static_cast<unsigned char>(std::lround(255 * s));
    rgb[3 * i + 1] = 0;
    rgb[3 * i + 2] = static_cast<unsigned char>(std::lround(255 * (1 - s)));
  }
  WritePpm(rgb, path);
}

std::vector<std::string> RenderStepMaps(const std::vector<Tensor<float>>& outputs,
                                        std::size_t grid_h, std::size_t grid_w,
                                        std::size_t image_h, std::size_t image_w,
                                        const std::string& prefix) {
  std::vector<std::string> paths;
  for (std::size_t t = 1; t < outputs.size(); ++t) {
    const AnomalyMap diff =
        ComputeAnomalyMap(outputs[t], outputs[t - 1], grid_h, grid_w, image_h, image_w, 1);
    paths.push_back(prefix + "_step" + std::to_string(t + 1) + ".ppm");
    RenderHeatmap(diff.pixel_map, paths.back());
  }
  return paths;
}

template AnomalyMap ComputeAnomalyMap<float>(const Tensor<float>&, const Tensor<float>&,
                                             std::size_t, std::size_t, std::size_t,
                                             std::size_t, std::size_t);
template AnomalyMap ComputeAnomalyMap<double>(const Tensor<double>&, const Tensor<double>&,
                                              std::size_t, std::size_t, std::size_t,
                                              std::size_t, std::size_t);
template EvalReport Evaluate<float>(const RasModel<float>&, const std::vector<Sample>&,
                                    const EvalOptions&, std::vector<AnomalyMap>*);
template EvalReport Evaluate<double>(const RasModel<double>&, const std::vector<Sample>&,
                                     const EvalOptions&, std::vector<AnomalyMap>*);
template RasModel<float> TrainModel<float>(const RunConfig&, const std::vector<Sample>&);
template RasModel<double> TrainModel<double>(const RunConfig&, const std::vector<Sample>&);

}  // namespace ras

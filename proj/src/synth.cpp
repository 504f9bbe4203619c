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

#include "ras/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <random>

namespace ras {
namespace {

using Rng = std::mt19937_64;

Rng SeededRng(std::initializer_list<std::uint64_t> words) {
  std::vector<std::uint32_t> seq;
  for (std::uint64_t w : words) {
    seq.push_back(static_cast<std::uint32_t>(w));
    seq.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  std::seed_seq ss(seq.begin(), seq.end());
  return Rng(ss);
}

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct ClassStyle {
  int family;  // 0 grating, 1 checkerboard, 2 blob field
  double scale;
  double angle;
  double contrast;
  double phase;  // fraction of one period
  double marker_y, marker_x;
};

ClassStyle StyleOf(const SyntheticSpec& spec, std::size_t class_id) {
  Rng rng = SeededRng({spec.seed, 0xC1A55, class_id});
  const double tier = static_cast<double>(class_id / 3);
  ClassStyle s;
  s.family = static_cast<int>(class_id % 3);
  switch (s.family) {
    case 0: s.scale = 10 + 3 * tier + Uniform(rng, 0, 2); break;
    case 1: s.scale = 10 + 3 * tier + Uniform(rng, 0, 3); break;
    default: s.scale = 2.5 + tier + Uniform(rng, 0, 1); break;
  }
  s.angle = Uniform(rng, 0, std::numbers::pi);
  s.contrast = Uniform(rng, 0.25, 0.35);
  s.phase = Uniform(rng, 0, 1);
  const double n = static_cast<double>(spec.image_size);
  s.marker_y = Uniform(rng, spec.marker_radius, n - spec.marker_radius);
  s.marker_x = Uniform(rng, spec.marker_radius, n - spec.marker_radius);
  return s;
}

// Clean texture for `style` sampled on a grid stretched by `zoom`.
Tensor<float> Render(const SyntheticSpec& spec, const ClassStyle& style, Rng& rng,
                     double zoom) {
  const std::size_t n = spec.image_size;
  Tensor<float> img({1, n, n});
  const double pi2 = 2 * std::numbers::pi;
  if (style.family == 0) {
    const double phase = pi2 * style.phase + std::normal_distribution<double>(0, 0.1)(rng);
    const double theta = style.angle + std::normal_distribution<double>(0, 0.01)(rng);
    const double cx = std::cos(theta), sy = std::sin(theta);
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x)
        img.at(0, y, x) = static_cast<float>(
            0.5 + style.contrast * std::sin(pi2 * zoom * (x * cx + y * sy) / style.scale + phase));
  } else if (style.family == 1) {
    std::normal_distribution<double> shift(0, 0.5);
    const double ox = (1 + style.phase) * style.scale + shift(rng);
    const double oy = (1 + style.phase) * style.scale + shift(rng);
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x) {
        const auto cell = static_cast<long>(std::floor((zoom * x + ox) / style.scale)) +
                          static_cast<long>(std::floor((zoom * y + oy) / style.scale));
        img.at(0, y, x) = static_cast<float>(0.5 + (cell % 2 ? 1 : -1) * style.contrast);
      }
  } else {
    // Blobs on a jittered lattice keep the field statistically stationary.
    const double r = style.scale / zoom;
    const double pitch = 3 * r;
    const double jitter = 0.15 * pitch;
    const double ox = Uniform(rng, 0, pitch), oy = Uniform(rng, 0, pitch);
    const auto cells = static_cast<long>(std::ceil(n / pitch)) + 2;
    std::vector<std::pair<double, double>> centres;
    for (long gy = -1; gy < cells; ++gy)
      for (long gx = -1; gx < cells; ++gx)
        centres.emplace_back(gy * pitch + oy + Uniform(rng, -jitter, jitter),
                             gx * pitch + ox + Uniform(rng, -jitter, jitter));
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x) {
        double v = 0.5 - style.contrast;
        for (const auto& [cy, cx] : centres) {
          const double d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
          if (d2 < 16 * r * r) v += 2 * style.contrast * std::exp(-d2 / (2 * r * r));
        }
        img.at(0, y, x) = static_cast<float>(v);
      }
  }
  // Class marker: a black and white bullseye at a fixed spot.
  if (spec.marker_radius > 0 && spec.marker_width > 0) {
    std::normal_distribution<double> shift(0, 0.5);
    const double my = style.marker_y + shift(rng), mx = style.marker_x + shift(rng);
    const double r = spec.marker_radius, w = spec.marker_width;
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x) {
        const double d = std::hypot(y + 0.5 - my, x + 0.5 - mx);
        if (d < r) img.at(0, y, x) = static_cast<long>(d / w) % 2 ? 0.0f : 1.0f;
      }
  }
  std::normal_distribution<double> noise(0, spec.pixel_noise);
  for (float& v : img.values())
    v = static_cast<float>(std::clamp(v + noise(rng), 0.0, 1.0));
  return img;
}

// Distance from (px, py) to the segment a-b.
double SegmentDistance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = ax + t * dx - px, ey = ay + t * dy - py;
  return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

const char* SplitName(Split split) { return split == Split::kTrain ? "train" : "test"; }

const char* InjectorName(Injector injector) {
  switch (injector) {
    case Injector::kPatchSwap: return "patch_swap";
    case Injector::kIntensityBlob: return "intensity_blob";
    case Injector::kScratchLine: return "scratch_line";
  }
  return "?";
}

void SyntheticSpec::Validate() const {
  const double s = static_cast<double>(image_size);
  if (num_classes == 0) throw ConfigError("synthetic spec needs at least one class");
  if (image_size < 16) throw ConfigError("synthetic images must be at least 16 pixels");
  if (blob_radius_min <= 0 || blob_radius_min > blob_radius_max || 2 * blob_radius_max > s) {
    throw ConfigError("blob radius range does not fit the image");
  }
  if (patch_min < 1 || patch_min > patch_max || patch_max > s) {
    throw ConfigError("patch size range does not fit the image");
  }
  if (scratch_length_min <= 0 || scratch_length_min > scratch_length_max ||
      scratch_length_max > s || scratch_width <= 0 || scratch_width > s) {
    throw ConfigError("scratch size does not fit the image");
  }
  if (contrast_min < 0 || contrast_min > contrast_max) {
    throw ConfigError("contrast range is empty");
  }
  if (pixel_noise < 0) throw ConfigError("pixel noise must be non-negative");
  if (marker_radius < 0 || marker_width < 0 || 2 * marker_radius > s) {
    throw ConfigError("marker does not fit the image");
  }
}

Tensor<float> RenderTexture(const SyntheticSpec& spec, std::size_t class_id,
                            std::uint64_t image_seed) {
  Rng rng = SeededRng({spec.seed, class_id, image_seed});
  return Render(spec, StyleOf(spec, class_id), rng, 1.0);
}

Tensor<float> InjectAnomaly(const SyntheticSpec& spec, Injector injector,
                            std::size_t class_id, std::uint64_t image_seed,
                            Tensor<float>& image) {
  spec.Validate();
  const std::size_t n = spec.image_size;
  if (image.shape() != Shape{1, n, n}) throw ShapeError("image does not match the spec size");
  Rng rng = SeededRng({spec.seed, class_id, image_seed, 0xA40});
  Tensor<float> mask({n, n});
  const double s = static_cast<double>(n);
  switch (injector) {
    case Injector::kIntensityBlob: {
      const double r = Uniform(rng, spec.blob_radius_min, spec.blob_radius_max);
      const double cy = Uniform(rng, r, s - r), cx = Uniform(rng, r, s - r);
      const double delta = (rng() & 1 ? 1 : -1) * Uniform(rng, spec.contrast_min, spec.contrast_max);
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
          const double dy = y + 0.5 - cy, dx = x + 0.5 - cx;
          if (dy * dy + dx * dx > r * r) continue;
          mask.at(y, x) = 1;
          float& v = image.at(0, y, x);
          // Reflect at the range limits so saturated texture still changes.
          double moved = v + delta;
          if (moved > 1) moved = 2 - moved;
          if (moved < 0) moved = -moved;
          v = static_cast<float>(moved);
        }
      break;
    }
    case Injector::kPatchSwap: {
      const auto size = static_cast<std::size_t>(Uniform(rng, spec.patch_min, spec.patch_max));
      const auto y0 = static_cast<std::size_t>(Uniform(rng, 0, s - size));
      const auto x0 = static_cast<std::size_t>(Uniform(rng, 0, s - size));
      const std::size_t donor_class = (class_id + 1) % spec.num_classes;
      Rng donor_rng = SeededRng({spec.seed, donor_class, image_seed, 0xD0});
      const double zoom = donor_class == class_id ? 2.0 : 1.0;
      const Tensor<float> donor = Render(spec, StyleOf(spec, donor_class), donor_rng, zoom);
      for (std::size_t y = y0; y < y0 + size; ++y)
        for (std::size_t x = x0; x < x0 + size; ++x) {
          image.at(0, y, x) = donor.at(0, y, x);
          mask.at(y, x) = 1;
        }
      break;
    }
    case Injector::kScratchLine: {
      const double len = Uniform(rng, spec.scratch_length_min, spec.scratch_length_max);
      const double angle = Uniform(rng, 0, std::numbers::pi);
      const double hx = 0.5 * len * std::abs(std::cos(angle));
      const double hy = 0.5 * len * std::abs(std::sin(angle));
      const double cx = Uniform(rng, hx, s - hx), cy = Uniform(rng, hy, s - hy);
      const double dx = 0.5 * len * std::cos(angle), dy = 0.5 * len * std::sin(angle);
      const float ink = rng() & 1 ? 1.0f : 0.0f;
      const double half = 0.5 * spec.scratch_width;
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
          if (SegmentDistance(x + 0.5, y + 0.5, cx - dx, cy - dy, cx + dx, cy + dy) > half) continue;
          mask.at(y, x) = 1;
          image.at(0, y, x) = ink;
        }
      break;
    }
  }
  return mask;
}

std::vector<SynthSample> SynthGenerate(const SyntheticSpec& spec, Split split) {
  spec.Validate();
  const std::size_t n = spec.image_size;
  std::vector<SynthSample> out;
  const std::uint64_t split_code = split == Split::kTrain ? 1 : 2;
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    const std::size_t normals =
        split == Split::kTrain ? spec.train_per_class : spec.test_normal_per_class;
    const std::size_t anomalies = split == Split::kTrain ? 0 : spec.test_anomalous_per_class;
    for (std::size_t i = 0; i < normals + anomalies; ++i) {
      SynthSample s;
      s.class_id = c;
      s.anomalous = i >= normals;
      const std::uint64_t image_seed = (split_code << 40) | (std::uint64_t{c} << 20) | i;
      char id[64];
      std::snprintf(id, sizeof(id), "%s_c%zu_%04zu", SplitName(split), c, i);
      s.id = id;
      s.image = RenderTexture(spec, c, image_seed);
      if (s.anomalous) {
        const auto injector = static_cast<Injector>((i - normals) % 3);
        s.injector = InjectorName(injector);
        s.mask = InjectAnomaly(spec, injector, c, image_seed, s.image);
      } else {
        s.mask = Tensor<float>({n, n});
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

FilterBank FilterBank::Make(std::vector<std::size_t> channels, std::uint64_t seed) {
  if (channels.empty()) throw ConfigError("filter bank needs at least one level");
  FilterBank bank;
  bank.channels = std::move(channels);
  Rng rng = SeededRng({seed, 0xF117E5});
  std::size_t in = 1;
  for (std::size_t out : bank.channels) {
    if (out == 0) throw ConfigError("filter bank level with zero channels");
    std::normal_distribution<double> w(0, 1 / std::sqrt(9.0 * in));
    Tensor<float> k({out, in, 3, 3});
    for (float& v : k.values()) v = static_cast<float>(w(rng));
    bank.kernels.push_back(std::move(k));
    in = out;
  }
  return bank;
}

FilterBank DefaultFilterBank() { return FilterBank::Make({24, 32, 56, 160}, kDefaultBankSeed); }

MultiLevelFeatures SynthFeatures(const Tensor<float>& image, const FilterBank& bank,
                                 const std::string& source_id) {
  if (image.rank() != 3 || image.dim(0) != 1) {
    throw ShapeError("synthetic features expect a [1 x H x W] image, got " +
                     ShapeString(image.shape()));
  }
  MultiLevelFeatures mlf;
  mlf.source_id = source_id;
  mlf.image_h = image.dim(1);
  mlf.image_w = image.dim(2);
  mlf.levels.reserve(bank.kernels.size());
  Tensor<float> input = image;
  for (float& v : input.values()) v = (v - kInputMean) / kInputStd;
  const Tensor<float>* prev = &input;
  for (const auto& k : bank.kernels) {
    const std::size_t cin = prev->dim(0), h = prev->dim(1), w = prev->dim(2);
    const std::size_t cout = k.dim(0), oh = (h + 1) / 2, ow = (w + 1) / 2;
    Tensor<float> out({cout, oh, ow});
    for (std::size_t co = 0; co < cout; ++co)
      for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
          double acc = 0;
          for (std::size_t ci = 0; ci < cin; ++ci) {
            const float* wk = k.data() + (co * cin + ci) * 9;
            for (int ky = 0; ky < 3; ++ky) {
              const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(2 * y) + ky - 1;
              if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
              for (int kx = 0; kx < 3; ++kx) {
                const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(2 * x) + kx - 1;
                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                acc += wk[ky * 3 + kx] * prev->at(ci, static_cast<std::size_t>(iy),
                                                  static_cast<std::size_t>(ix));
              }
            }
          }
          out.at(co, y, x) = static_cast<float>(std::abs(acc));
        }
    mlf.levels.push_back(std::move(out));
    prev = &mlf.levels.back();
  }
  return mlf;
}

}  // namespace ras

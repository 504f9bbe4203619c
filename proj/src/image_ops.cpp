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

#include "ras/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ras {
namespace {

struct Planes {
  std::size_t c, h, w;
};

Planes PlanesOf(const Tensor<float>& t) {
  if (t.rank() == 2) return {1, t.dim(0), t.dim(1)};
  if (t.rank() == 3) return {t.dim(0), t.dim(1), t.dim(2)};
  throw ShapeError("expected [H x W] or [C x H x W], got " + ShapeString(t.shape()));
}

Shape Reshape(const Tensor<float>& like, std::size_t c, std::size_t h,
              std::size_t w) {
  return like.rank() == 2 ? Shape{h, w} : Shape{c, h, w};
}

// Separable 1-D pass over n samples spaced by `stride`.
void BoxLine(const float* in, float* out, std::size_t n, std::size_t stride,
             std::size_t k) {
  const std::ptrdiff_t lo = -static_cast<std::ptrdiff_t>(k / 2);
  const std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(k) - 1 + lo;
  for (std::size_t i = 0; i < n; ++i) {
    const std::ptrdiff_t a = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) + lo);
    const std::ptrdiff_t b = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1,
                                                      static_cast<std::ptrdiff_t>(i) + hi);
    double sum = 0;
    for (std::ptrdiff_t j = a; j <= b; ++j) sum += in[j * stride];
    out[i * stride] = static_cast<float>(sum / static_cast<double>(b - a + 1));
  }
}

}  // namespace

Tensor<float> BoxFilter(const Tensor<float>& planes, std::size_t k) {
  if (k == 0) throw ConfigError("box filter size must be positive");
  const Planes p = PlanesOf(planes);
  // A 2-D box with exclude-pad counting factorises into two 1-D passes.
  Tensor<float> tmp(planes.shape());
  Tensor<float> out(planes.shape());
  for (std::size_t c = 0; c < p.c; ++c) {
    const float* src = planes.data() + c * p.h * p.w;
    float* mid = tmp.data() + c * p.h * p.w;
    float* dst = out.data() + c * p.h * p.w;
    for (std::size_t y = 0; y < p.h; ++y) BoxLine(src + y * p.w, mid + y * p.w, p.w, 1, k);
    for (std::size_t x = 0; x < p.w; ++x) BoxLine(mid + x, dst + x, p.h, p.w, k);
  }
  return out;
}

Tensor<float> BilinearResize(const Tensor<float>& planes, std::size_t out_h,
                             std::size_t out_w) {
  const Planes p = PlanesOf(planes);
  if (out_h == 0 || out_w == 0) throw ShapeError("bilinear resize to an empty grid");
  if (out_h == p.h && out_w == p.w) return planes;
  struct Tap {
    std::size_t i0, i1;
    double w1;
  };
  auto taps = [](std::size_t in, std::size_t out) {
    std::vector<Tap> t(out);
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    for (std::size_t o = 0; o < out; ++o) {
      const double src = std::max(0.0, (static_cast<double>(o) + 0.5) * scale - 0.5);
      const auto i0 = std::min(static_cast<std::size_t>(src), in - 1);
      t[o] = {i0, std::min(i0 + 1, in - 1), src - static_cast<double>(i0)};
    }
    return t;
  };
  const auto ty = taps(p.h, out_h), tx = taps(p.w, out_w);
  Tensor<float> out(Reshape(planes, p.c, out_h, out_w));
  for (std::size_t c = 0; c < p.c; ++c) {
    const float* src = planes.data() + c * p.h * p.w;
    float* dst = out.data() + c * out_h * out_w;
    for (std::size_t y = 0; y < out_h; ++y) {
      const float* r0 = src + ty[y].i0 * p.w;
      const float* r1 = src + ty[y].i1 * p.w;
      const double wy = ty[y].w1;
      for (std::size_t x = 0; x < out_w; ++x) {
        const double wx = tx[x].w1;
        const double top = (1 - wx) * r0[tx[x].i0] + wx * r0[tx[x].i1];
        const double bot = (1 - wx) * r1[tx[x].i0] + wx * r1[tx[x].i1];
        dst[y * out_w + x] = static_cast<float>((1 - wy) * top + wy * bot);
      }
    }
  }
  return out;
}

void WritePgm(const Tensor<float>& map, const std::string& path) {
  if (map.rank() != 2) throw ShapeError("PGM needs an [H x W] map");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "P5\n" << map.dim(1) << ' ' << map.dim(0) << "\n255\n";
  for (float v : map.values()) {
    const float c = std::clamp(v, 0.0f, 1.0f);
    os.put(static_cast<char>(static_cast<unsigned char>(std::lround(c * 255.0f))));
  }
  if (!os) throw IoError("write failed for " + path);
}

Tensor<float> ReadPgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::string magic;
  std::size_t w = 0, h = 0, maxval = 0;
  is >> magic >> w >> h >> maxval;
  if (magic != "P5" || !is || maxval != 255 || w == 0 || h == 0) {
    throw FormatError("not an 8-bit binary PGM: " + path);
  }
  is.get();
  std::vector<unsigned char> bytes(w * h);
  if (!is.read(reinterpret_cast<char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()))) {
    throw FormatError("truncated PGM: " + path);
  }
  Tensor<float> out({h, w});
  for (std::size_t i = 0; i < bytes.size(); ++i) out[i] = bytes[i] / 255.0f;
  return out;
}

void WritePpm(const Tensor<unsigned char>& rgb, const std::string& path) {
  if (rgb.rank() != 3 || rgb.dim(2) != 3) throw ShapeError("PPM needs [H x W x 3]");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "P6\n" << rgb.dim(1) << ' ' << rgb.dim(0) << "\n255\n";
  os.write(reinterpret_cast<const char*>(rgb.data()),
           static_cast<std::streamsize>(rgb.size()));
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace ras

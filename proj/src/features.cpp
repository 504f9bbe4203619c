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

#include "ras/features.hpp"

#include <fstream>
#include <sstream>

#include "ras/binary_io.hpp"
#include "ras/image_ops.hpp"

namespace ras {

std::size_t MultiLevelFeatures::TotalChannels() const {
  std::size_t c = 0;
  for (const auto& level : levels) c += level.dim(0);
  return c;
}

void MultiLevelFeatures::Validate() const {
  if (levels.empty()) throw ContractError("feature set has no levels");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& level = levels[k];
    if (level.rank() != 3 || level.size() == 0) {
      throw ContractError("level " + std::to_string(k) + " must be a non-empty [C x H x W], got " +
                          ShapeString(level.shape()));
    }
    if (k > 0 && (level.dim(1) > levels[k - 1].dim(1) || level.dim(2) > levels[k - 1].dim(2))) {
      throw ContractError("level " + std::to_string(k) + " is larger than the level above it");
    }
  }
}

Tensor<float> Assemble(const MultiLevelFeatures& mlf, std::size_t target_h,
                       std::size_t target_w) {
  mlf.Validate();
  if (target_h == 0 || target_w == 0) {
    target_h = mlf.levels.back().dim(1);
    target_w = mlf.levels.back().dim(2);
  }
  const std::size_t tokens = target_h * target_w;
  Tensor<float> out({mlf.TotalChannels(), tokens});
  float* dst = out.data();
  for (const auto& level : mlf.levels) {
    const Tensor<float> aligned =
        BilinearResize(BoxFilter(level, 3), target_h, target_w);
    std::copy(aligned.storage().begin(), aligned.storage().end(), dst);
    dst += aligned.size();
  }
  return out;
}

void WriteFeatureFile(const MultiLevelFeatures& mlf, const std::string& path) {
  mlf.Validate();
  std::ostringstream os(std::ios::binary);
  os.write("RASF", 4);
  io::WritePod<std::uint16_t>(os, kFeatureFileVersion);
  io::WritePod<std::uint16_t>(os, kDtypeF32);
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(mlf.levels.size()));
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(mlf.image_h));
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(mlf.image_w));
  io::WriteString(os, mlf.source_id);
  for (const auto& level : mlf.levels)
    for (std::size_t d = 0; d < 3; ++d)
      io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(level.dim(d)));
  for (const auto& level : mlf.levels) io::WriteArray(os, level.data(), level.size());

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  const std::string bytes = os.str();
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("write failed for " + path);
}

MultiLevelFeatures ReadFeatureFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  io::ExpectMagic(is, "RASF");
  const auto version = io::ReadPod<std::uint16_t>(is, "version");
  if (version != kFeatureFileVersion) {
    throw FormatError("unsupported feature file version " + std::to_string(version));
  }
  const auto dtype = io::ReadPod<std::uint16_t>(is, "dtype");
  if (dtype != kDtypeF32) throw FormatError("unsupported dtype code " + std::to_string(dtype));
  const auto n = io::ReadPod<std::uint32_t>(is, "level count");
  if (n == 0 || n > 64) throw FormatError("implausible level count " + std::to_string(n));
  MultiLevelFeatures mlf;
  mlf.image_h = io::ReadPod<std::uint32_t>(is, "image height");
  mlf.image_w = io::ReadPod<std::uint32_t>(is, "image width");
  mlf.source_id = io::ReadString(is, "source id");
  std::vector<Shape> shapes(n);
  for (auto& s : shapes) {
    for (int d = 0; d < 3; ++d) s.push_back(io::ReadPod<std::uint32_t>(is, "level shape"));
    if (NumElements(s) == 0 || NumElements(s) > (std::size_t{1} << 30)) {
      throw FormatError("implausible level shape " + ShapeString(s));
    }
  }
  for (const auto& s : shapes) {
    Tensor<float> level(s);
    io::ReadArray(is, level.data(), level.size(), "feature file");
    mlf.levels.push_back(std::move(level));
  }
  io::ExpectEnd(is, "feature payload");
  try {
    mlf.Validate();
  } catch (const ContractError& e) {
    throw FormatError(e.what());
  }
  return mlf;
}

}  // namespace ras

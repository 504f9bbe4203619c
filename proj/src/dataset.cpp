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

#include "ras/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ras/features.hpp"
#include "ras/image_ops.hpp"

namespace ras {
namespace fs = std::filesystem;

std::vector<const ManifestEntry*> Manifest::Split(const std::string& split) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries)
    if (e.split == split) out.push_back(&e);
  return out;
}

std::vector<std::string> Manifest::ClassIds() const {
  std::set<std::string> ids;
  for (const auto& e : entries) ids.insert(e.class_id);
  return {ids.begin(), ids.end()};
}

std::string Manifest::Resolve(const std::string& path) const {
  if (path.empty() || fs::path(path).is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / path).string();
}

void Manifest::Validate() const {
  for (const auto& e : entries) {
    if (e.split == "train" && e.anomalous) {
      throw ContractError("train split must hold only normal samples: " + e.path);
    }
  }
}

Manifest ParseManifest(const std::string& text, const std::string& base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', start);
      f.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const std::string where = "manifest line " + std::to_string(lineno);
    if (f.size() != 5) throw FormatError(where + ": expected 5 tab-separated fields");
    if (f[0] != "train" && f[0] != "test") throw FormatError(where + ": unknown split " + f[0]);
    if (f[3] != "normal" && f[3] != "anomalous") {
      throw FormatError(where + ": unknown label " + f[3]);
    }
    if (f[1].empty() || f[2].empty()) throw FormatError(where + ": empty class or path");
    m.entries.push_back({f[0], f[1], f[2], f[3] == "anomalous", f[4] == "-" ? "" : f[4]});
  }
  m.Validate();
  return m;
}

Manifest ReadManifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open manifest " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ParseManifest(ss.str(), fs::path(path).parent_path().string());
}

std::string FormatManifest(const Manifest& manifest) {
  std::ostringstream os;
  for (const auto& e : manifest.entries) {
    os << e.split << '\t' << e.class_id << '\t' << e.path << '\t'
       << (e.anomalous ? "anomalous" : "normal") << '\t'
       << (e.mask_path.empty() ? "-" : e.mask_path) << '\n';
  }
  return os.str();
}

void WriteManifest(const Manifest& manifest, const std::string& path) {
  manifest.Validate();
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << FormatManifest(manifest);
  if (!os) throw IoError("write failed for " + path);
}

std::vector<Sample> LoadSplit(const Manifest& manifest, const std::string& split,
                              std::size_t grid_h, std::size_t grid_w) {
  std::vector<Sample> out;
  for (const ManifestEntry* e : manifest.Split(split)) {
    const MultiLevelFeatures mlf = ReadFeatureFile(manifest.Resolve(e->path));
    Sample s;
    s.id = mlf.source_id.empty() ? e->path : mlf.source_id;
    s.class_id = e->class_id;
    s.anomalous = e->anomalous;
    s.grid_h = grid_h ? grid_h : mlf.levels.back().dim(1);
    s.grid_w = grid_w ? grid_w : mlf.levels.back().dim(2);
    s.f_org = Assemble(mlf, s.grid_h, s.grid_w);
    s.image_h = mlf.image_h;
    s.image_w = mlf.image_w;
    if (!e->mask_path.empty()) {
      s.mask = ReadPgm(manifest.Resolve(e->mask_path));
      if (s.mask.dim(0) != s.image_h || s.mask.dim(1) != s.image_w) {
        throw FormatError("mask size differs from image size for " + e->path);
      }
      for (float& v : s.mask.values()) v = v >= 0.5f ? 1.0f : 0.0f;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string WriteSyntheticDataset(const SyntheticSpec& spec, const FilterBank& bank,
                                  const std::string& out_dir) {
  spec.Validate();
  Manifest manifest;
  manifest.base_dir = out_dir;
  for (Split split : {Split::kTrain, Split::kTest}) {
    const std::string name = SplitName(split);
    fs::create_directories(fs::path(out_dir) / name);
    for (const SynthSample& s : SynthGenerate(spec, split)) {
      const std::string stem = name + "/" + s.id;
      WriteFeatureFile(SynthFeatures(s.image, bank, s.id), manifest.Resolve(stem + ".rasf"));
      WritePgm(s.image.Reshaped({spec.image_size, spec.image_size}),
               manifest.Resolve(stem + ".pgm"));
      ManifestEntry e{name, std::to_string(s.class_id), stem + ".rasf", s.anomalous, ""};
      if (split == Split::kTest) {
        e.mask_path = stem + "_mask.pgm";
        WritePgm(s.mask, manifest.Resolve(e.mask_path));
      }
      manifest.entries.push_back(std::move(e));
    }
  }
  const std::string path = (fs::path(out_dir) / "manifest.tsv").string();
  WriteManifest(manifest, path);
  return path;
}

}  // namespace ras

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

#include "ras/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

namespace ras {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("bad boolean for " + key + ": '" + value + "'");
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field Number(T RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) {
            c.*member = ParseNumber<T>(k, v);
          },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

template <typename T>
Field ModelNumber(T ModelConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) {
            c.model.*member = ParseNumber<T>(k, v);
          },
          [member](const RunConfig& c) { return std::to_string(c.model.*member); }};
}

Field ModelReal(double ModelConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) {
            c.model.*member = ParseNumber<double>(k, v);
          },
          [member](const RunConfig& c) { return FormatDouble(c.model.*member); }};
}

Field OptimReal(double AdamWConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) {
            c.optim.*member = ParseNumber<double>(k, v);
          },
          [member](const RunConfig& c) { return FormatDouble(c.optim.*member); }};
}

const std::vector<std::pair<std::string, Field>>& Fields() {
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"c_org", ModelNumber(&ModelConfig::c_org)},
      {"c_rec", ModelNumber(&ModelConfig::c_rec)},
      {"height", ModelNumber(&ModelConfig::height)},
      {"width", ModelNumber(&ModelConfig::width)},
      {"encoders", ModelNumber(&ModelConfig::encoders)},
      {"decoders", ModelNumber(&ModelConfig::decoders)},
      {"num_heads", ModelNumber(&ModelConfig::num_heads)},
      {"ffn_mult", ModelNumber(&ModelConfig::ffn_mult)},
      {"alpha_train", ModelReal(&ModelConfig::alpha_train)},
      {"pos_embed",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.model.use_encoder_pos_embed = ParseBool(k, v);
        },
        [](const RunConfig& c) {
          return std::string(c.model.use_encoder_pos_embed ? "true" : "false");
        }}},
      {"variant",
       {[](RunConfig& c, const std::string&, const std::string& v) {
          c.model.variant = ParseVariant(v);
        },
        [](const RunConfig& c) { return std::string(VariantName(c.model.variant)); }}},
      {"lr", OptimReal(&AdamWConfig::lr)},
      {"beta1", OptimReal(&AdamWConfig::beta1)},
      {"beta2", OptimReal(&AdamWConfig::beta2)},
      {"eps", OptimReal(&AdamWConfig::eps)},
      {"weight_decay", OptimReal(&AdamWConfig::weight_decay)},
      {"batch_size", Number(&RunConfig::batch_size)},
      {"epochs", Number(&RunConfig::epochs)},
      {"seed", Number(&RunConfig::seed)},
      {"grid_h", Number(&RunConfig::grid_h)},
      {"grid_w", Number(&RunConfig::grid_w)},
      {"score_pool", Number(&RunConfig::score_pool)},
      {"manifest",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.manifest = v; },
        [](const RunConfig& c) { return c.manifest; }}},
  };
  return fields;
}

const Field& FindField(const std::string& key) {
  for (const auto& [name, field] : Fields())
    if (name == key) return field;
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

void RunConfig::Validate() const {
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (score_pool == 0) throw ConfigError("score_pool must be positive");
  if (!(optim.lr > 0)) throw ConfigError("lr must be positive");
  if (!(optim.beta1 >= 0 && optim.beta1 < 1 && optim.beta2 >= 0 && optim.beta2 < 1)) {
    throw ConfigError("betas must lie in [0, 1)");
  }
  if (!(optim.eps > 0)) throw ConfigError("eps must be positive");
  if (!(optim.weight_decay >= 0)) throw ConfigError("weight_decay must be >= 0");
  if ((grid_h == 0) != (grid_w == 0)) throw ConfigError("set both grid_h and grid_w or neither");
  ModelConfig probe = model;
  if (probe.c_org == 0) probe.c_org = 1;
  if (probe.height == 0) probe.height = 1;
  if (probe.width == 0) probe.width = 1;
  probe.Validate();
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, field] : Fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

void SetConfigValue(RunConfig& config, const std::string& key, const std::string& value) {
  FindField(key).set(config, key, value);
}

namespace {

template <typename Setter>
void ForEachKeyValue(const std::string& text, Setter&& set) {
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
    }
    set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
}

}  // namespace

void ApplyConfigText(RunConfig& config, const std::string& text) {
  ForEachKeyValue(text, [&](const std::string& k, const std::string& v) {
    SetConfigValue(config, k, v);
  });
}

RunConfig ReadConfigFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  RunConfig config;
  ApplyConfigText(config, ss.str());
  return config;
}

std::string FormatConfig(const RunConfig& config) {
  std::string out;
  for (const auto& [name, field] : Fields()) out += name + "=" + field.get(config) + "\n";
  return out;
}

namespace {

struct SpecField {
  std::function<void(SyntheticSpec&, const std::string&, const std::string&)> set;
  std::function<std::string(const SyntheticSpec&)> get;
};

template <typename T>
SpecField SpecMember(T SyntheticSpec::*member) {
  return {[member](SyntheticSpec& s, const std::string& k, const std::string& v) {
            s.*member = ParseNumber<T>(k, v);
          },
          [member](const SyntheticSpec& s) {
            if constexpr (std::is_floating_point_v<T>) return FormatDouble(s.*member);
            else return std::to_string(s.*member);
          }};
}

const std::vector<std::pair<std::string, SpecField>>& SpecFields() {
  static const std::vector<std::pair<std::string, SpecField>> fields = {
      {"num_classes", SpecMember(&SyntheticSpec::num_classes)},
      {"train_per_class", SpecMember(&SyntheticSpec::train_per_class)},
      {"test_normal_per_class", SpecMember(&SyntheticSpec::test_normal_per_class)},
      {"test_anomalous_per_class", SpecMember(&SyntheticSpec::test_anomalous_per_class)},
      {"image_size", SpecMember(&SyntheticSpec::image_size)},
      {"pixel_noise", SpecMember(&SyntheticSpec::pixel_noise)},
      {"marker_radius", SpecMember(&SyntheticSpec::marker_radius)},
      {"marker_width", SpecMember(&SyntheticSpec::marker_width)},
      {"blob_radius_min", SpecMember(&SyntheticSpec::blob_radius_min)},
      {"blob_radius_max", SpecMember(&SyntheticSpec::blob_radius_max)},
      {"patch_min", SpecMember(&SyntheticSpec::patch_min)},
      {"patch_max", SpecMember(&SyntheticSpec::patch_max)},
      {"scratch_length_min", SpecMember(&SyntheticSpec::scratch_length_min)},
      {"scratch_length_max", SpecMember(&SyntheticSpec::scratch_length_max)},
      {"scratch_width", SpecMember(&SyntheticSpec::scratch_width)},
      {"contrast_min", SpecMember(&SyntheticSpec::contrast_min)},
      {"contrast_max", SpecMember(&SyntheticSpec::contrast_max)},
      {"seed", SpecMember(&SyntheticSpec::seed)},
  };
  return fields;
}

}  // namespace

const std::vector<std::string>& SpecKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, field] : SpecFields()) k.push_back(name);
    return k;
  }();
  return keys;
}

void SetSpecValue(SyntheticSpec& spec, const std::string& key, const std::string& value) {
  for (const auto& [name, field] : SpecFields()) {
    if (name == key) return field.set(spec, key, value);
  }
  throw ConfigError("unknown spec key '" + key + "'");
}

void ApplySpecText(SyntheticSpec& spec, const std::string& text) {
  ForEachKeyValue(text, [&](const std::string& k, const std::string& v) {
    SetSpecValue(spec, k, v);
  });
}

std::string FormatSpec(const SyntheticSpec& spec) {
  std::string out;
  for (const auto& [name, field] : SpecFields()) out += name + "=" + field.get(spec) + "\n";
  return out;
}

}  // namespace ras

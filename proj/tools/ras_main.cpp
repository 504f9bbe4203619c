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

// Command-line front end: one binary, one subcommand per pipeline stage.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ras/config.hpp"
#include "ras/dataset.hpp"
#include "ras/eval.hpp"
#include "ras/synth.hpp"
#include "ras/train.hpp"

namespace fs = std::filesystem;

namespace ras::cli {
namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void RequireFile(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("no ") + what + " given");
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw IoError("write failed for " + path.string());
}

std::string ReadText(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string Fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void LogConfig(const std::string& text) {
  std::cerr << "# resolved config\n";
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) std::cerr << "#   " << line << "\n";
}

// Options shared by every command that builds a RunConfig.
struct ConfigOptions {
  std::string file;
  std::vector<std::string> sets;
  std::string manifest;
  std::optional<std::size_t> epochs;
  std::optional<std::uint64_t> seed;
  std::string variant;

  void Register(CLI::App* app) {
    app->add_option("--config", file, "key=value run config file");
    app->add_option("--set", sets, "override one config key, as key=value (repeatable)");
    app->add_option("--manifest", manifest, "dataset manifest (overrides the config)");
    app->add_option("--epochs", epochs, "training epochs (overrides the config)");
    app->add_option("--seed", seed, "run seed (overrides the config)");
    app->add_option("--variant", variant, "full, gate_only or transformer_only");
  }

  RunConfig Resolve() const {
    RunConfig config;
    if (!file.empty()) {
      RequireFile(file, "config file");
      ApplyConfigText(config, ReadText(file));
    }
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
      SetConfigValue(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!manifest.empty()) config.manifest = manifest;
    if (epochs) config.epochs = *epochs;
    if (seed) config.seed = *seed;
    if (!variant.empty()) config.model.variant = ParseVariant(variant);
    config.Validate();
    return config;
  }
};

struct Data {
  Manifest manifest;
  std::vector<Sample> train, test;
};

Data LoadData(const std::string& manifest_path, std::size_t grid_h, std::size_t grid_w,
              bool need_train) {
  RequireFile(manifest_path, "manifest");
  Data d;
  try {
    d.manifest = ReadManifest(manifest_path);
    if (need_train) d.train = LoadSplit(d.manifest, "train", grid_h, grid_w);
    d.test = LoadSplit(d.manifest, "test", grid_h, grid_w);
  } catch (const IoError& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  }
  if (need_train && d.train.empty()) throw ContractError("manifest has no train entries");
  return d;
}

std::vector<Tensor<float>> Features(const std::vector<Sample>& samples) {
  std::vector<Tensor<float>> out;
  for (const Sample& s : samples) out.push_back(s.f_org);
  return out;
}

void WriteReport(const fs::path& dir, const std::string& stem, const EvalReport& r) {
  WriteText(dir / (stem + ".tsv"), FormatReportTsv(r));
  WriteText(dir / (stem + ".txt"), FormatReportKeyValues(r));
}

TrainState<float> LoadCkpt(const std::string& path) {
  RequireFile(path, "checkpoint");
  return LoadCheckpoint<float>(path);
}

// ---- synth-data -----------------------------------------------------------

struct SynthCmd {
  std::string spec_file, out;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> classes;

  void Register(CLI::App* app) {
    app->add_option("--spec", spec_file, "key=value synthetic benchmark spec");
    app->add_option("--set", sets, "override one spec key, as key=value (repeatable)");
    app->add_option("--seed", seed, "benchmark seed (overrides the spec)");
    app->add_option("--classes", classes, "number of texture classes (overrides the spec)");
    app->add_option("--out", out, "output directory")->required();
  }

  int Run() const {
    SyntheticSpec spec;
    if (!spec_file.empty()) {
      RequireFile(spec_file, "spec file");
      ApplySpecText(spec, ReadText(spec_file));
    }
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
      SetSpecValue(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) spec.seed = *seed;
    if (classes) spec.num_classes = *classes;
    spec.Validate();
    LogConfig(FormatSpec(spec));
    fs::create_directories(out);
    WriteText(fs::path(out) / "spec.txt", FormatSpec(spec));
    const std::string manifest = WriteSyntheticDataset(spec, DefaultFilterBank(), out);
    std::cout << "manifest\t" << manifest << "\n";
    return 0;
  }
};

// ---- train ----------------------------------------------------------------

struct TrainCmd {
  ConfigOptions config;
  std::string out, resume;

  void Register(CLI::App* app) {
    config.Register(app);
    app->add_option("--resume", resume, "continue from this checkpoint");
    app->add_option("--out", out, "run directory")->required();
  }

  int Run() const {
    std::optional<TrainState<float>> state;
    RunConfig cfg;
    if (!resume.empty()) {
      state = LoadCkpt(resume);
      cfg = state->config;
      if (config.epochs) cfg.epochs = state->config.epochs = *config.epochs;
      if (!config.manifest.empty()) cfg.manifest = state->config.manifest = config.manifest;
    } else {
      cfg = config.Resolve();
    }
    const Data data = LoadData(cfg.manifest, cfg.grid_h, cfg.grid_w, true);
    cfg = WithDataExtents(cfg, data.train);
    if (state && !(state->config.model == cfg.model)) {
      throw ConfigError("checkpoint model does not match the dataset");
    }
    const std::string resolved = FormatConfig(cfg);
    LogConfig(resolved);

    Trainer<float> trainer = state ? Trainer<float>(std::move(*state)) : Trainer<float>(cfg);
    const auto features = Features(data.train);
    fs::create_directories(out);
    WriteText(fs::path(out) / "config.txt", resolved);
    const auto start = std::chrono::steady_clock::now();
    trainer.Fit(features, [&](std::uint64_t epoch, double loss) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cerr << "epoch " << epoch << "/" << cfg.epochs << " loss " << Fixed(loss, 6) << " ("
                << Fixed(secs, 1) << "s)\n";
    });
    std::string log = "epoch\tloss\n";
    for (std::size_t e = 0; e < trainer.state().epoch_losses.size(); ++e)
      log += std::to_string(e + 1) + "\t" + Fixed(trainer.state().epoch_losses[e], 9) + "\n";
    WriteText(fs::path(out) / "train_log.tsv", log);
    SaveCheckpoint(trainer.state(), (fs::path(out) / "model.rasc").string());

    if (!data.test.empty()) {
      const EvalReport r = Evaluate(trainer.model(), data.test, {.score_pool = cfg.score_pool});
      WriteReport(out, "validation", r);
      std::cout << FormatReportTsv(r);
    }
    return 0;
  }
};

// ---- eval / sweep-noise ---------------------------------------------------

struct EvalCmd {
  std::string ckpt, manifest, out;
  double alpha = 0;
  std::uint64_t noise_seed = 0;

  void Register(CLI::App* app) {
    app->add_option("--ckpt", ckpt, "checkpoint to evaluate")->required();
    app->add_option("--manifest", manifest, "manifest (defaults to the one used for training)");
    app->add_option("--alpha", alpha, "test-time noise intensity");
    app->add_option("--noise-seed", noise_seed, "seed for test-time noise");
    app->add_option("--out", out, "output directory")->required();
  }

  int Run() const {
    const TrainState<float> state = LoadCkpt(ckpt);
    const RunConfig& cfg = state.config;
    const Data data = LoadData(manifest.empty() ? cfg.manifest : manifest, cfg.grid_h,
                              cfg.grid_w, false);
    const EvalReport r = Evaluate(state.model, data.test,
                                  {.alpha = alpha, .noise_seed = noise_seed,
                                   .score_pool = cfg.score_pool});
    fs::create_directories(out);
    WriteReport(out, "report", r);
    std::cout << FormatReportTsv(r);
    return 0;
  }
};

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad list entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<std::size_t> ParseCounts(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : ParseList(text)) {
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw ConfigError("expected non-negative integers in '" + text + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

struct SweepNoiseCmd {
  std::string ckpt, manifest, out, alphas = "0,10,20,30,40,50";
  std::uint64_t noise_seed = 0;

  void Register(CLI::App* app) {
    app->add_option("--ckpt", ckpt, "checkpoint to evaluate")->required();
    app->add_option("--manifest", manifest, "manifest (defaults to the one used for training)");
    app->add_option("--alphas", alphas, "comma-separated noise intensities")
        ->capture_default_str();
    app->add_option("--noise-seed", noise_seed, "seed for test-time noise");
    app->add_option("--out", out, "output directory")->required();
  }

  int Run() const {
    const std::vector<double> list = ParseList(alphas);
    const TrainState<float> state = LoadCkpt(ckpt);
    const RunConfig& cfg = state.config;
    const Data data = LoadData(manifest.empty() ? cfg.manifest : manifest, cfg.grid_h,
                              cfg.grid_w, false);
    const auto reports = NoiseSweep(state.model, data.test, list, noise_seed, cfg.score_pool);
    fs::create_directories(out);
    std::string table = "alpha\timage_auroc\tpixel_auroc\timage_drop\n";
    for (const EvalReport& r : reports) {
      char stem[64];
      std::snprintf(stem, sizeof(stem), "report_alpha%g", r.alpha);
      WriteReport(out, stem, r);
      table += Fixed(r.alpha, 1) + "\t" + Fixed(r.image_auroc) + "\t" + Fixed(r.pixel_auroc) +
               "\t" + Fixed(r.image_auroc - reports.front().image_auroc) + "\n";
    }
    WriteText(fs::path(out) / "sweep.tsv", table);
    std::cout << table;
    return 0;
  }
};

// ---- ablate / depth-sweep -------------------------------------------------

Experiment LoadExperiment(const ConfigOptions& options) {
  Experiment ex;
  ex.config = options.Resolve();
  Data data = LoadData(ex.config.manifest, ex.config.grid_h, ex.config.grid_w, true);
  ex.config = WithDataExtents(ex.config, data.train);
  ex.train = std::move(data.train);
  ex.test = std::move(data.test);
  if (ex.test.empty()) throw ContractError("manifest has no test entries");
  LogConfig(FormatConfig(ex.config));
  return ex;
}

struct AblateCmd {
  ConfigOptions config;
  std::string out, variants = "full,gate_only,transformer_only";

  void Register(CLI::App* app) {
    config.Register(app);
    app->add_option("--variants", variants, "comma-separated variants")->capture_default_str();
    app->add_option("--out", out, "output directory")->required();
  }

  int Run() const {
    std::vector<Variant> list;
    std::stringstream ss(variants);
    for (std::string v; std::getline(ss, v, ',');) list.push_back(ParseVariant(v));
    const Experiment ex = LoadExperiment(config);
    fs::create_directories(out);
    std::string table = "variant\timage_auroc\tpixel_auroc\n";
    for (Variant v : list) {
      std::cerr << "training " << VariantName(v) << "\n";
      const EvalReport r = AblationRun(ex, v);
      WriteReport(out, "report_" + std::string(VariantName(v)), r);
      table += std::string(VariantName(v)) + "\t" + Fixed(r.image_auroc) + "\t" +
               Fixed(r.pixel_auroc) + "\n";
    }
    WriteText(fs::path(out) / "summary.tsv", table);
    std::cout << table;
    return 0;
  }
};

struct DepthSweepCmd {
  ConfigOptions config;
  std::string out, encoders = "0,1,2", decoders = "1,2,3,4";

  void Register(CLI::App* app) {
    config.Register(app);
    app->add_option("--encoders", encoders, "comma-separated T_e values")->capture_default_str();
    app->add_option("--decoders", decoders, "comma-separated T_d values")->capture_default_str();
    app->add_option("--out", out, "output directory")->required();
  }

  int Run() const {
    const auto te = ParseCounts(encoders), td = ParseCounts(decoders);
    const Experiment ex = LoadExperiment(config);
    fs::create_directories(out);
    const auto grid = DepthSweep(ex, te, td);
    std::string table = "encoders\tdecoders\timage_auroc\tpixel_auroc\n";
    for (const DepthCell& cell : grid) {
      WriteReport(out, "report_te" + std::to_string(cell.encoders) + "_td" +
                           std::to_string(cell.decoders),
                  cell.report);
      table += std::to_string(cell.encoders) + "\t" + std::to_string(cell.decoders) + "\t" +
               Fixed(cell.report.image_auroc) + "\t" + Fixed(cell.report.pixel_auroc) + "\n";
    }
    WriteText(fs::path(out) / "summary.tsv", table);
    std::cout << table;
    return 0;
  }
};

// ---- render ---------------------------------------------------------------

struct RenderCmd {
  std::string ckpt, manifest, sample, out;

  void Register(CLI::App* app) {
    app->add_option("--ckpt", ckpt, "checkpoint")->required();
    app->add_option("--manifest", manifest, "manifest (defaults to the one used for training)");
    app->add_option("--sample", sample, "sample id or manifest path")->required();
    app->add_option("--out", out, "output directory")->required();
  }

  int Run() const {
    const TrainState<float> state = LoadCkpt(ckpt);
    const RunConfig& cfg = state.config;
    const std::string manifest_path = manifest.empty() ? cfg.manifest : manifest;
    RequireFile(manifest_path, "manifest");
    Manifest m = ReadManifest(manifest_path);
    Manifest one;
    one.base_dir = m.base_dir;
    for (const ManifestEntry& e : m.entries) {
      if (e.path == sample || fs::path(e.path).stem() == sample) one.entries.push_back(e);
    }
    if (one.entries.size() != 1) throw ConfigError("sample '" + sample + "' not found");
    const std::string split = one.entries[0].split;
    const Sample s = LoadSplit(one, split, cfg.grid_h, cfg.grid_w).at(0);

    Tape<float> tape(&state.model.params(), false);
    const ForwardResult<float> r = Forward(tape, state.model, s.f_org, false, nullptr);
    const AnomalyMap map = ComputeAnomalyMap(s.f_org, r.f_rec.value(), s.grid_h, s.grid_w,
                                             s.image_h, s.image_w, cfg.score_pool);
    std::vector<Tensor<float>> outputs;
    for (const auto& o : r.outputs) outputs.push_back(o.value());

    fs::create_directories(out);
    const std::string stem = fs::path(one.entries[0].path).stem().string();
    const fs::path base = fs::path(out) / stem;
    RenderHeatmap(map.pixel_map, base.string() + "_heatmap.ppm");
    const auto steps = RenderStepMaps(outputs, s.grid_h, s.grid_w, s.image_h, s.image_w,
                                      base.string());
    WriteText(base.string() + "_score.txt", "image_score=" + Fixed(map.image_score, 9) + "\n");
    std::cout << "heatmap\t" << base.string() << "_heatmap.ppm\n";
    for (const auto& p : steps) std::cout << "step\t" << p << "\n";
    std::cout << "image_score\t" << Fixed(map.image_score, 9) << "\n";
    return 0;
  }
};

std::string OneLine(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

int ReportError(std::string_view kind, const std::string& msg, int code) {
  std::cerr << "error kind=" << kind << " msg=\"" << OneLine(msg) << "\"\n";
  return code;
}

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"Unified feature-reconstruction anomaly detection"};
  app.require_subcommand(1);
  SynthCmd synth;
  TrainCmd train;
  EvalCmd eval;
  SweepNoiseCmd sweep;
  AblateCmd ablate;
  DepthSweepCmd depth;
  RenderCmd render;
  synth.Register(app.add_subcommand("synth-data", "generate the synthetic texture benchmark"));
  train.Register(app.add_subcommand("train", "train a model on a manifest"));
  eval.Register(app.add_subcommand("eval", "evaluate a checkpoint"));
  sweep.Register(app.add_subcommand("sweep-noise", "evaluate under test-time feature noise"));
  ablate.Register(app.add_subcommand("ablate", "train and evaluate decoder variants"));
  depth.Register(app.add_subcommand("depth-sweep", "train and evaluate an encoder/decoder grid"));
  render.Register(app.add_subcommand("render", "write heatmaps for one sample"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("UsageError", e.what(), kExitConfig);
  }

  try {
    if (app.got_subcommand("synth-data")) return synth.Run();
    if (app.got_subcommand("train")) return train.Run();
    if (app.got_subcommand("eval")) return eval.Run();
    if (app.got_subcommand("sweep-noise")) return sweep.Run();
    if (app.got_subcommand("ablate")) return ablate.Run();
    if (app.got_subcommand("depth-sweep")) return depth.Run();
    if (app.got_subcommand("render")) return render.Run();
  } catch (const ConfigError& e) {
    return ReportError(e.kind(), e.what(), kExitConfig);
  } catch (const FormatError& e) {
    return ReportError(e.kind(), e.what(), kExitConfig);
  } catch (const Error& e) {
    return ReportError(e.kind(), e.what(), kExitRuntime);
  } catch (const std::exception& e) {
    return ReportError("RuntimeError", e.what(), kExitRuntime);
  }
  return kExitRuntime;
}

}  // namespace ras::cli

int main(int argc, char** argv) { return ras::cli::Main(argc, argv); }

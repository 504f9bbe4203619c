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

// Acceptance gate. Runs every primary criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ras/config.hpp"
#include "ras/dataset.hpp"
#include "ras/eval.hpp"
#include "ras/features.hpp"
#include "ras/synth.hpp"
#include "ras/train.hpp"

namespace ras {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using D = Tensor<double>;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

std::string Slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

D Random(const Shape& shape, std::mt19937_64& gen, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  D t(shape);
  for (double& v : t.values()) v = dist(gen);
  return t;
}

// ---- gradient check ---------------------------------------------------------

Outcome GradientCheck() {
  const auto start = Clock::now();
  ModelConfig cfg;
  cfg.c_org = 8;
  cfg.c_rec = 16;
  cfg.height = cfg.width = 4;
  cfg.encoders = 1;
  cfg.decoders = 2;
  cfg.num_heads = 2;
  cfg.ffn_mult = 2;
  RasModel<double> model(cfg, 3);
  std::mt19937_64 gen(4);
  // Move every parameter off its initial value so biases and LN terms matter.
  for (auto& p : model.params()) {
    const D delta = Random(p.value.shape(), gen, 0.3);
    for (std::size_t i = 0; i < delta.size(); ++i) p.value[i] += delta[i];
  }
  const D f = Random({cfg.c_org, cfg.tokens()}, gen);
  Rng noise_rng(5);
  D noise = InjectNoise(f, cfg.alpha_train, noise_rng);
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] -= f[i];
  auto loss = [&](Tape<double>& tape) {
    const auto r = Forward(tape, model, f, true, nullptr, &noise);
    return MseLoss(tape.Constant(f), r.f_rec);
  };
  Gradients<double> grads(model.params().size());
  {
    Tape<double> tape(&model.params());
    tape.Backward(loss(tape), &grads);
  }
  auto value = [&]() {
    Tape<double> tape(&model.params(), false);
    return loss(tape).value()[0];
  };
  const double h = 1e-4;
  double worst = 0;
  std::string worst_name;
  std::size_t scalars = 0;
  for (ParamId id : model.TrainableParams()) {
    D& x = model.params()[id].value;
    for (std::size_t i = 0; i < x.size(); ++i, ++scalars) {
      const double saved = x[i];
      x[i] = saved + h;
      const double up = value();
      x[i] = saved - h;
      const double down = value();
      x[i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double analytic = grads.touched[id] ? grads.grads[id][i] : 0.0;
      const double err = std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric));
      if (err > worst) {
        worst = err;
        worst_name = model.params()[id].name;
      }
    }
  }
  const double secs = Seconds(start);
  return {worst < 1e-4 && secs < 60,
          Fmt("max_rel_err=%.3g (%s) scalars=%zu time=%.1fs", worst, worst_name.c_str(), scalars,
              secs)};
}

// ---- equation-literal suite -----------------------------------------------

Outcome EquationSuite() {
  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  };

  {  // Noise: sigma = alpha ||f|| / C, Monte-Carlo std within 2%.
    const D f = D::Matrix({{1.0}, {-2.0}, {0.5}, {3.0}});
    const double alpha = 20, sigma = alpha * std::sqrt(14.25) / 4;
    Rng rng(123);
    double sum = 0, sq = 0;
    const int draws = 100000;
    for (int d = 0; d < draws; ++d) {
      const double e = InjectNoise(f, alpha, rng).at(1, 0) + 2.0;
      sum += e;
      sq += e * e;
    }
    const double mean = sum / draws, sd = std::sqrt(sq / draws - mean * mean);
    check(std::abs(sd / sigma - 1) < 0.02, "noise std");
    check(std::abs(NoiseStd(f, alpha)[0] - sigma) < 1e-12, "noise sigma formula");
  }

  ModelConfig cfg;
  cfg.c_org = 6;
  cfg.c_rec = 8;
  cfg.height = 2;
  cfg.width = 3;
  cfg.encoders = 1;
  cfg.decoders = 2;
  cfg.num_heads = 2;
  cfg.ffn_mult = 2;
  RasModel<double> model(cfg, 1);
  std::mt19937_64 gen(2);
  const D l = Random({6, 8}, gen), c = Random({6, 8}, gen);

  {  // Gate identities through the block's test hook.
    for (double a : {1.0, 0.0}) {
      Tape<double> tape(&model.params());
      BlockOptions<double> opt;
      opt.forced_gate = a;
      const auto r = RasformerBlock(tape, model, 0, tape.Constant(c), tape.Constant(l), opt);
      const D expect = a == 1.0 ? l : D(l.shape());
      check(r.filtered.value() == expect, a == 1.0 ? "gate a=1" : "gate a=0");
    }
  }
  {  // Fusion: l* = (W l + l_tran) / 2.
    const auto& fuse = model.blocks()[0].fuse;
    const D w = Random({8, 8}, gen), lt = Random({6, 8}, gen);
    model.params()[fuse.weight].value = w;
    Tape<double> tape(&model.params());
    const D got = FuseLatent(tape, fuse, tape.Constant(l), tape.Constant(lt)).value();
    double err = 0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        double wl = 0;
        for (std::size_t k = 0; k < 8; ++k) wl += w.at(j, k) * l.at(i, k);
        err = std::max(err, std::abs(got.at(i, j) - (wl + lt.at(i, j)) / 2));
      }
    check(err < 1e-6, "fusion");
  }
  {  // Loss: sum of squares over H*W positions.
    const D f = D::Matrix({{1, 2, 3}, {4, 5, 6}});
    const D r = D::Matrix({{1, 0, 3}, {5, 5, 3}});
    check(std::abs(MseLoss(f, r) - (4.0 + 1.0 + 9.0) / 3) < 1e-6, "loss");
  }
  {  // Anomaly map: one differing token scores its L2 norm.
    D f({3, 4}, 0.5), r = f;
    const double v[3] = {3, -4, 12};
    for (std::size_t k = 0; k < 3; ++k) r.at(k, 2) += v[k];
    const AnomalyMap m = ComputeAnomalyMap(f, r, 2, 2, 2, 2);
    check(std::abs(m.token_map[2] - 13.0) < 1e-6 && m.token_map[0] == 0.0f, "single token L2");
  }
  std::string detail = failed.empty() ? "7 checks" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

// ---- AUROC oracle ------------------------------------------------------------

Outcome AurocOracle() {
  std::mt19937_64 gen(2024);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 200)(gen);
    const int levels = std::uniform_int_distribution<int>(2, 20)(gen);  // forces ties
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::uniform_int_distribution<int>(0, levels)(gen) * 0.37;
      y[i] = static_cast<int>(gen() & 1);
    }
    y[0] = 0;
    y[1] = 1;
    long long twice = 0, pos = 0, neg = 0;
    for (std::size_t i = 0; i < n; ++i) (y[i] ? pos : neg) += 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (y[i] == 1 && y[j] == 0) twice += s[i] > s[j] ? 2 : s[i] == s[j] ? 1 : 0;
    const double brute = static_cast<double>(twice) / (2.0 * pos * neg);
    if (Auroc(s, y) != brute) ++mismatches;
  }
  return {mismatches == 0, Fmt("1000 instances, %zu mismatches", mismatches)};
}

// ---- shared benchmark ------------------------------------------------------

struct Bench {
  RunConfig config;
  std::vector<Sample> train, test;
  std::vector<Tensor<float>> features;
};

Bench LoadBench(const fs::path& dir) {
  const SyntheticSpec spec;
  const std::string manifest = WriteSyntheticDataset(spec, DefaultFilterBank(), dir.string());
  Bench b;
  b.config = ReadConfigFile(RAS_DESK_CONFIG);
  const Manifest m = ReadManifest(manifest);
  b.train = LoadSplit(m, "train");
  b.test = LoadSplit(m, "test");
  b.config = WithDataExtents(b.config, b.train);
  for (const Sample& s : b.train) b.features.push_back(s.f_org);
  return b;
}

struct Trained {
  RasModel<float> model;
  double train_seconds;
};

Trained Train(const Bench& b, Variant variant, std::size_t decoders, std::uint64_t seed) {
  RunConfig c = b.config;
  c.model.variant = variant;
  c.model.decoders = decoders;
  c.seed = seed;
  const auto start = Clock::now();
  Trainer<float> trainer(c);
  trainer.Fit(b.features);
  return {trainer.model(), Seconds(start)};
}

// ---- determinism -------------------------------------------------------------

Outcome Determinism(const Bench& b, const RasModel<float>& model, const fs::path& dir) {
  std::vector<AnomalyMap> m1, m2;
  const EvalReport r1 = Evaluate(model, b.test, {}, &m1);
  const EvalReport r2 = Evaluate(model, b.test, {}, &m2);
  bool eval_same = r1 == r2 && m1.size() == m2.size();
  for (std::size_t i = 0; eval_same && i < m1.size(); ++i)
    eval_same = m1[i].pixel_map == m2[i].pixel_map && m1[i].image_score == m2[i].image_score;

  RunConfig c = b.config;
  c.epochs = 4;
  const std::vector<Tensor<float>> subset(b.features.begin(), b.features.begin() + 24);
  auto run = [&](const std::string& name) {
    Trainer<float> t(c);
    t.Fit(subset);
    SaveCheckpoint(t.state(), (dir / name).string());
    return Slurp(dir / name);
  };
  const std::string a = run("a.rasc"), again = run("b.rasc");
  Trainer<float> half(c);
  half.RunEpoch(subset);
  half.RunEpoch(subset);
  SaveCheckpoint(half.state(), (dir / "half.rasc").string());
  Trainer<float> resumed(LoadCheckpoint<float>((dir / "half.rasc").string()));
  resumed.Fit(subset);
  SaveCheckpoint(resumed.state(), (dir / "resumed.rasc").string());
  const bool train_same = a == again;
  const bool resume_same = a == Slurp(dir / "resumed.rasc");
  return {eval_same && train_same && resume_same,
          Fmt("eval=%s train=%s resume=%s", eval_same ? "same" : "DIFF",
              train_same ? "same" : "DIFF", resume_same ? "same" : "DIFF")};
}

// ---- format stability ------------------------------------------------------

Outcome FormatStability(const fs::path& dir) {
  const fs::path data = RAS_TEST_DATA;
  std::vector<std::string> failed;
  const MultiLevelFeatures mlf = ReadFeatureFile((data / "golden.rasf").string());
  if (mlf.source_id != "golden" || mlf.image_h != 8 || mlf.levels.size() != 2 ||
      mlf.levels[0].shape() != Shape{2, 4, 4} || mlf.levels[1].shape() != Shape{3, 2, 2} ||
      mlf.levels[1][11] != 0.5f * 11 - 1.5f)
    failed.push_back("rasf header");
  WriteFeatureFile(mlf, (dir / "golden.rasf").string());
  if (Slurp(dir / "golden.rasf") != Slurp(data / "golden.rasf")) failed.push_back("rasf bytes");

  const TrainState<float> state = LoadCheckpoint<float>((data / "golden.rasc").string());
  if (state.epoch != 1 || state.optim.step != 2 || state.config.model.c_org != 6 ||
      state.config.model.c_rec != 8 || state.model.params()[0].name != "input_proj.weight")
    failed.push_back("rasc header");
  SaveCheckpoint(state, (dir / "golden.rasc").string());
  if (Slurp(dir / "golden.rasc") != Slurp(data / "golden.rasc")) failed.push_back("rasc bytes");
  std::string detail = failed.empty() ? "feature file and checkpoint fixtures" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

int Main() {
  int failures = 0;
  auto report = [&](const char* name, const Outcome& o) {
    std::printf("%s  %-22s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  const fs::path dir = fs::temp_directory_path() / "ras_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  report("gradient_check", GradientCheck());
  report("equation_literal", EquationSuite());
  report("auroc_oracle", AurocOracle());
  report("format_stability", FormatStability(dir));

  const Bench bench = LoadBench(dir / "bench");
  const std::vector<std::uint64_t> seeds = {0, 1, 2};
  const std::size_t td = bench.config.model.decoders;
  std::vector<Trained> full, transformer_only, shallow;
  for (std::uint64_t s : seeds) {
    full.push_back(Train(bench, Variant::kFull, td, s));
    std::printf("# trained full seed=%llu in %.0fs\n", static_cast<unsigned long long>(s),
                full.back().train_seconds);
    std::fflush(stdout);
  }

  report("determinism", Determinism(bench, full[0].model, dir));

  {
    const auto start = Clock::now();
    const EvalReport r = Evaluate(full[0].model, bench.test);
    const double secs = full[0].train_seconds + Seconds(start);
    std::vector<double> base_image, base_pixel;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const EvalReport u = Evaluate(RasModel<float>(bench.config.model, s), bench.test);
      base_image.push_back(u.image_auroc);
      base_pixel.push_back(u.pixel_auroc);
    }
    double bi = 0, bp = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      bi += base_image[i] / 5;
      bp += base_pixel[i] / 5;
    }
    const bool ok = r.image_auroc >= 0.90 && r.pixel_auroc >= 0.85 &&
                    r.image_auroc - bi >= 0.30 && r.pixel_auroc - bp >= 0.30 &&
                    bench.config.epochs <= 100 && secs < 15 * 60;
    report("e2e_benchmark",
           {ok, Fmt("image=%.4f pixel=%.4f untrained(mean of 5)=%.4f/%.4f epochs=%zu "
                    "time=%.0fs",
                    r.image_auroc, r.pixel_auroc, bi, bp, bench.config.epochs, secs)});
    std::printf("# untrained image AUROC per seed: %.3f %.3f %.3f %.3f %.3f\n", base_image[0],
                base_image[1], base_image[2], base_image[3], base_image[4]);
  }

  for (std::uint64_t s : seeds) transformer_only.push_back(Train(bench, Variant::kTransformerOnly, td, s));
  std::vector<double> full_img, to_img, full_drop, to_drop;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto a = NoiseSweep(full[i].model, bench.test, kDefaultNoiseAlphas, 7,
                              bench.config.score_pool);
    const auto b = NoiseSweep(transformer_only[i].model, bench.test, kDefaultNoiseAlphas, 7,
                              bench.config.score_pool);
    full_img.push_back(a.front().image_auroc);
    to_img.push_back(b.front().image_auroc);
    full_drop.push_back(a.front().image_auroc - a.back().image_auroc);
    to_drop.push_back(b.front().image_auroc - b.back().image_auroc);
    std::printf("# seed %zu sweep full:", i);
    for (const auto& r : a) std::printf(" %.3f", r.image_auroc);
    std::printf(" | transformer_only:");
    for (const auto& r : b) std::printf(" %.3f", r.image_auroc);
    std::printf("\n");
  }
  report("table4_gate_trend",
         {Median(full_img) >= Median(to_img),
          Fmt("median image full=%.4f transformer_only=%.4f", Median(full_img), Median(to_img))});

  std::vector<double> shallow_img;
  for (std::uint64_t s : seeds) {
    const Trained t = Train(bench, Variant::kFull, 1, s);
    shallow_img.push_back(Evaluate(t.model, bench.test).image_auroc);
  }
  report("table5_depth_trend",
         {bench.config.model.encoders == 2 && td == 4 && Median(full_img) >= Median(shallow_img),
          Fmt("T_e=%zu median image T_d=4 %.4f vs T_d=1 %.4f", bench.config.model.encoders,
              Median(full_img), Median(shallow_img))});

  report("table6_noise_trend",
         {Median(full_drop) < Median(to_drop),
          Fmt("median drop alpha 0->50 full=%.4f transformer_only=%.4f", Median(full_drop),
              Median(to_drop))});

  fs::remove_all(dir);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

}  // namespace
}  // namespace ras

int main() { return ras::Main(); }

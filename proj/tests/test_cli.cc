// tests/test_cli.cc

// Copyright 2026  SAS toolkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sas/alignment_io.h"
#include "sas/cli.h"
#include "sas/mel_io.h"
#include "sas/run_config.h"
#include "sas/wav_io.h"

using namespace sas;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string output;
};

CmdResult run_cmd(const std::string& cmd) {
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) res.code = WEXITSTATUS(status);
  return res;
}

std::string bin() { return SAS_BIN_PATH; }

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("sas_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string gen_corpus_cmd(const fs::path& out) {
  return bin() +
         " gen-corpus --seed 7 --vocab-size 8 --images 12 --captions 1"
         " --noise-std 0 --frames-per-token 4 --n-mels 16 --out " +
         out.string();
}

const char* kMicroIni = R"(# miniature run configuration
[model]
n_regions = 36
feature_dim = 2048
n_classes = 1601
fuse_units = 6
proj1_units = 9
proj2_units = 6
n_mels = 16
prenet_units = 6
prenet_dropout = 0.0
attn_dim = 6
location_filters = 3
location_kernel = 5
rnn_units = 8
postnet_filters = 5
postnet_kernel = 3
postnet_layers = 3
embedder_conv_filters = 5
embedder_conv_kernel = 3
embedder_conv_stride = 2
embedder_gru_hidden = 3
max_frames = 60

[losses]
lambda_ec = 0.25

[trainer]
seed = 1
batch_size = 4
max_iters = 2
peak_lr = 0.001
warmup_iters = 1
decay_gamma = 1.0
eps_min = 97.5
dev_eval_interval = 0
checkpoint_interval = 1

[audio]
n_mels = 16
)";

std::string write_micro_ini(const fs::path& dir) {
  const fs::path path = dir / "run.ini";
  std::ofstream out(path);
  out << kMicroIni;
  return path.string();
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<nlohmann::json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(nlohmann::json::parse(line));
  }
  return records;
}

std::vector<nlohmann::json> train_records(const fs::path& log_path) {
  std::vector<nlohmann::json> out;
  for (auto& r : read_jsonl(log_path))
    if (r.contains("lr")) out.push_back(r);
  return out;
}

// Generates the corpus and trains a 2-iteration checkpoint; reused
// fixture for the synthesize/evaluate cases.
struct TrainedFixture {
  fs::path root, corpus, run;
  std::string config;

  explicit TrainedFixture(const std::string& name) {
    root = temp_dir(name);
    corpus = root / "corpus";
    run = root / "run";
    REQUIRE(run_cmd(gen_corpus_cmd(corpus)).code == 0);
    config = write_micro_ini(root);
    const CmdResult tr = run_cmd(bin() + " train --config " + config +
                                 " --data " + corpus.string() + " --out " +
                                 run.string());
    REQUIRE(tr.code == 0);
  }
  ~TrainedFixture() { fs::remove_all(root); }

  std::string checkpoint() const {
    return (run / "checkpoint_final.sasckpt").string();
  }
};

}  // namespace

TEST_CASE("run config file parsing and overrides") {
  const fs::path dir = temp_dir("runconfig");
  const fs::path path = dir / "cfg.ini";
  {
    std::ofstream out(path);
    out << "; comment\n"
        << "# another comment\n"
        << "[trainer]\n"
        << "  peak_lr = 0.004  \n"
        << "batch_size=8\n"
        << "feature_mode = baseline-grid\n"
        << "\n"
        << "[model]\n"
        << "rnn_units = 32\n"
        << "[losses]\n"
        << "lambda_ec = 0\n"
        << "[audio]\n"
        << "n_mels = 20\n";
  }
  RunConfig cfg = parse_run_config_file(path.string());
  CHECK(cfg.trainer.peak_lr == 0.004);
  CHECK(cfg.trainer.batch_size == 8);
  CHECK(cfg.trainer.feature_mode == "baseline-grid");
  CHECK(cfg.model.rnn_units == 32);
  CHECK(cfg.losses.lambda_ec == 0.0);
  CHECK(cfg.audio.n_mels == 20);
  // Untouched keys keep their defaults.
  CHECK(cfg.trainer.warmup_iters == 4000);
  CHECK(cfg.model.n_regions == 36);
  CHECK(cfg.audio.sample_rate == 16000);

  apply_override(cfg, "trainer.eps_min=100");
  CHECK(cfg.trainer.eps_min == 100.0);
  apply_override(cfg, "losses.lambda_ec=0.5");
  CHECK(cfg.losses.lambda_ec == 0.5);
  apply_override(cfg, "model.n_mels = 24");
  CHECK(cfg.model.n_mels == 24);

  CHECK_THROWS_AS(apply_override(cfg, "noequals"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "nodot=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, ".key=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "trainer.=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "bogus.key=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "trainer.unknown=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "trainer.batch_size=four"),
                  ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "trainer.batch_size=4x"), ConfigError);

  auto write_and_parse = [&](const std::string& body) {
    const fs::path p = dir / "bad.ini";
    std::ofstream out(p);
    out << body;
    out.close();
    return parse_run_config_file(p.string());
  };
  CHECK_THROWS_AS(write_and_parse("[trainer]\nunknown_key = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(write_and_parse("[mystery]\nseed = 1\n"), ConfigError);
  CHECK_THROWS_AS(write_and_parse("seed = 1\n"), ConfigError);
  CHECK_THROWS_AS(write_and_parse("[trainer\nseed = 1\n"), ConfigError);
  CHECK_THROWS_AS(write_and_parse("[trainer]\nseed\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config_file((dir / "missing.ini").string()),
                  ConfigError);

  fs::remove_all(dir);
}

TEST_CASE("env_num_workers contract") {
  unsetenv("SAS_NUM_WORKERS");
  CHECK(env_num_workers() == 1);
  setenv("SAS_NUM_WORKERS", "4", 1);
  CHECK(env_num_workers() == 4);
  setenv("SAS_NUM_WORKERS", "1", 1);
  CHECK(env_num_workers() == 1);
  setenv("SAS_NUM_WORKERS", "0", 1);
  CHECK_THROWS_AS(env_num_workers(), ConfigError);
  setenv("SAS_NUM_WORKERS", "-2", 1);
  CHECK_THROWS_AS(env_num_workers(), ConfigError);
  setenv("SAS_NUM_WORKERS", "abc", 1);
  CHECK_THROWS_AS(env_num_workers(), ConfigError);
  setenv("SAS_NUM_WORKERS", "3x", 1);
  CHECK_THROWS_AS(env_num_workers(), ConfigError);
  unsetenv("SAS_NUM_WORKERS");
}

TEST_CASE("gen-corpus command") {
  const fs::path dir = temp_dir("gencorpus");

  const CmdResult ok = run_cmd(gen_corpus_cmd(dir / "a"));
  CHECK(ok.code == 0);
  const std::string manifest = (dir / "a" / "manifest.json").string();
  CHECK(ok.output.find(manifest) != std::string::npos);
  CHECK(fs::exists(manifest));

  // Config validation failures exit 2 with a message.
  const CmdResult bad = run_cmd(bin() + " gen-corpus --images 5 --out " +
                                (dir / "bad").string());
  CHECK(bad.code == 2);
  CHECK(bad.output.find("n_images") != std::string::npos);

  // Same arguments give byte-identical outputs.
  REQUIRE(run_cmd(gen_corpus_cmd(dir / "b")).code == 0);
  CHECK(fnv1a_file(manifest) ==
        fnv1a_file((dir / "b" / "manifest.json").string()));
  CHECK(fnv1a_file((dir / "a" / "features" / "img00000.rf").string()) ==
        fnv1a_file((dir / "b" / "features" / "img00000.rf").string()));
  CHECK(fnv1a_file((dir / "a" / "mels" / "img00003_cap0.mel").string()) ==
        fnv1a_file((dir / "b" / "mels" / "img00003_cap0.mel").string()));

  fs::remove_all(dir);
}

TEST_CASE("train command, overrides and exit codes") {
  const fs::path dir = temp_dir("train");
  const fs::path corpus = dir / "corpus";
  REQUIRE(run_cmd(gen_corpus_cmd(corpus)).code == 0);
  const std::string config = write_micro_ini(dir);
  const std::string base = bin() + " train --config " + config + " --data " +
                           corpus.string();

  const fs::path run1 = dir / "run1";
  const CmdResult tr = run_cmd(base + " --out " + run1.string());
  CHECK(tr.code == 0);
  CHECK(fs::exists(run1 / "train_log.jsonl"));
  CHECK(fs::exists(run1 / "checkpoint_000000.sasckpt"));
  CHECK(fs::exists(run1 / "checkpoint_000001.sasckpt"));
  CHECK(fs::exists(run1 / "checkpoint_final.sasckpt"));
  CHECK(tr.output.find("checkpoint_final.sasckpt") != std::string::npos);
  const auto recs = train_records(run1 / "train_log.jsonl");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["iter"] == 1);
  CHECK(recs[1]["iter"] == 2);
  // eps_min 97.5 keeps early ratios strictly below 100.
  CHECK(recs[0]["tf_ratio"].get<double>() < 100.0);

  // Override pins the teacher-forcing ratio at exactly 100.
  const fs::path run2 = dir / "run2";
  CHECK(run_cmd(base + " --out " + run2.string() +
                " --override trainer.eps_min=100")
            .code == 0);
  for (const auto& r : train_records(run2 / "train_log.jsonl"))
    CHECK(r["tf_ratio"].get<double>() == 100.0);

  // Override disables the embedding constraint entirely.
  const fs::path run3 = dir / "run3";
  CHECK(run_cmd(base + " --out " + run3.string() +
                " --override losses.lambda_ec=0")
            .code == 0);
  for (const auto& r : train_records(run3 / "train_log.jsonl")) {
    CHECK(r["L_ec"].get<double>() == 0.0);
    CHECK(r["total"].get<double>() ==
          doctest::Approx(r["L_s"].get<double>() + r["L_st"].get<double>())
              .epsilon(1e-12));
  }

  // Resuming from the mid-run checkpoint continues at iteration 2.
  const fs::path run4 = dir / "run4";
  const CmdResult resumed =
      run_cmd(base + " --out " + run4.string() + " --resume " +
              (run1 / "checkpoint_000001.sasckpt").string());
  CHECK(resumed.code == 0);
  const auto resumed_recs = train_records(run4 / "train_log.jsonl");
  REQUIRE(resumed_recs.size() == 1);
  CHECK(resumed_recs[0]["iter"] == 2);
  CHECK(fs::exists(run4 / "checkpoint_final.sasckpt"));

  // Feature-mode mismatch against the resumed checkpoint is a config error.
  CHECK(run_cmd(base + " --out " + (dir / "run5").string() + " --resume " +
                (run1 / "checkpoint_000001.sasckpt").string() +
                " --override trainer.feature_mode=baseline-grid")
            .code == 2);

  // Bad override and unknown config key exit 2; missing data exits 1.
  CHECK(run_cmd(base + " --out " + (dir / "run6").string() +
                " --override trainer.bogus=1")
            .code == 2);
  CHECK(run_cmd(base + " --out " + (dir / "run7").string() +
                " --resume " + (dir / "nope.sasckpt").string())
            .code == 2);
  {
    std::ofstream out(dir / "bad.ini");
    out << "[trainer]\nmystery = 1\n";
  }
  CHECK(run_cmd(bin() + " train --config " + (dir / "bad.ini").string() +
                " --data " + corpus.string() + " --out " +
                (dir / "run8").string())
            .code == 2);
  CHECK(run_cmd(bin() + " train --config " + config + " --data " +
                (dir / "missing").string() + " --out " +
                (dir / "run9").string())
            .code == 1);

  // Invalid SAS_NUM_WORKERS is rejected before training starts.
  CHECK(run_cmd("SAS_NUM_WORKERS=abc " + base + " --out " +
                (dir / "run10").string())
            .code == 2);
  CHECK(run_cmd("SAS_NUM_WORKERS=2 " + base + " --out " +
                (dir / "run11").string())
            .code == 0);

  fs::remove_all(dir);
}

TEST_CASE("synthesize command") {
  const TrainedFixture fx("synth");
  AudioConfig audio;
  audio.n_mels = 16;

  // Single feature file: one WAV, one mel cache, one alignment dump.
  const fs::path out1 = fx.root / "synth1";
  const std::string feat =
      (fx.corpus / "features" / "img00000.rf").string();
  const CmdResult single =
      run_cmd(bin() + " synthesize --checkpoint " + fx.checkpoint() +
              " --features " + feat + " --out " + out1.string());
  CHECK(single.code == 0);
  CHECK(single.output.find("img00000") != std::string::npos);
  CHECK(fs::exists(out1 / "img00000.wav"));
  CHECK(fs::exists(out1 / "img00000.mel"));
  CHECK(fs::exists(out1 / "img00000.align"));

  const MelSpectrogram mel =
      read_mel((out1 / "img00000.mel").string(), audio);
  CHECK(mel.frames.rows() == 60);  // untrained model runs to max_frames
  CHECK(mel.frames.cols() == 16);

  bool truncated = false;
  const Mat align =
      read_alignment((out1 / "img00000.align").string(), &truncated);
  CHECK(truncated);
  CHECK(align.rows() == 60);
  CHECK(align.cols() == 36);
  for (int i = 0; i < align.rows(); ++i) {
    CHECK(align.row(i).sum() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(align.row(i).minCoeff() >= 0.0);
  }

  const Waveform wave = read_wav((out1 / "img00000.wav").string());
  CHECK(wave.sample_rate == 16000);
  CHECK(wave.samples.size() >= 10000);
  CHECK(wave.samples.size() <= 14000);
  for (double s : wave.samples) CHECK(std::abs(s) <= 1.0);

  // Directory mode processes every .rf file it finds.
  const fs::path feat_dir = fx.root / "feats";
  fs::create_directories(feat_dir);
  fs::copy_file(fx.corpus / "features" / "img00001.rf",
                feat_dir / "img00001.rf");
  fs::copy_file(fx.corpus / "features" / "img00002.rf",
                feat_dir / "img00002.rf");
  const fs::path out2 = fx.root / "synth2";
  const CmdResult multi =
      run_cmd(bin() + " synthesize --checkpoint " + fx.checkpoint() +
              " --features " + feat_dir.string() + " --out " + out2.string());
  CHECK(multi.code == 0);
  CHECK(fs::exists(out2 / "img00001.wav"));
  CHECK(fs::exists(out2 / "img00002.wav"));

  // A corrupt feature file is reported, exits 1, and does not stop others.
  {
    std::ofstream out(feat_dir / "broken.rf", std::ios::binary);
    out << "not region features";
  }
  const fs::path out3 = fx.root / "synth3";
  const CmdResult corrupt =
      run_cmd(bin() + " synthesize --checkpoint " + fx.checkpoint() +
              " --features " + feat_dir.string() + " --out " + out3.string());
  CHECK(corrupt.code == 1);
  CHECK(corrupt.output.find("broken.rf") != std::string::npos);
  CHECK(fs::exists(out3 / "img00001.wav"));
  CHECK(fs::exists(out3 / "img00002.wav"));
  CHECK_FALSE(fs::exists(out3 / "broken.wav"));

  // Bad pointers are configuration errors.
  CHECK(run_cmd(bin() + " synthesize --checkpoint " +
                (fx.root / "nope.sasckpt").string() + " --features " + feat +
                " --out " + (fx.root / "x").string())
            .code == 2);
  CHECK(run_cmd(bin() + " synthesize --checkpoint " + fx.checkpoint() +
                " --features " + (fx.root / "nope.rf").string() + " --out " +
                (fx.root / "y").string())
            .code == 2);
}

TEST_CASE("evaluate command") {
  const TrainedFixture fx("eval");

  // Template-transcriber evaluation on the dev split.
  const fs::path json1 = fx.root / "eval_dev.json";
  const CmdResult dev =
      run_cmd(bin() + " evaluate --checkpoint " + fx.checkpoint() +
              " --data " + fx.corpus.string() + " --split dev --out " +
              json1.string());
  CHECK(dev.code == 0);
  CHECK(dev.output.find("B1") != std::string::npos);
  {
    std::ifstream in(json1);
    REQUIRE(in.good());
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("per_image").size() == 1);
    for (const char* key : {"B1", "B2", "B3", "B4", "M", "R", "C"}) {
      const double v = j.at("report").at(key).get<double>();
      CHECK(v >= 0.0);
      CHECK(v <= 100.0);
    }
  }

  // Oracle transcriber saturates the table row.
  const fs::path json2 = fx.root / "eval_oracle.json";
  const CmdResult oracle =
      run_cmd(bin() + " evaluate --checkpoint " + fx.checkpoint() +
              " --data " + fx.corpus.string() +
              " --split train --oracle-transcriber --out " + json2.string());
  CHECK(oracle.code == 0);
  {
    const std::size_t nl = oracle.output.find('\n');
    REQUIRE(nl != std::string::npos);
    double v[7];
    REQUIRE(std::sscanf(oracle.output.c_str() + nl + 1,
                        "%lf %lf %lf %lf %lf %lf %lf", &v[0], &v[1], &v[2],
                        &v[3], &v[4], &v[5], &v[6]) == 7);
    CHECK(v[0] == doctest::Approx(100.0));
    CHECK(v[1] == doctest::Approx(100.0));
    CHECK(v[2] == doctest::Approx(100.0));
    CHECK(v[3] == doctest::Approx(100.0));
    CHECK(v[5] == doctest::Approx(100.0));  // ROUGE-L column
    CHECK(v[6] > 0.0);                      // CIDEr-D column
    std::ifstream in(json2);
    const nlohmann::json j = nlohmann::json::parse(in);
    for (const auto& item : j.at("per_image"))
      CHECK(item.at("candidate") == item.at("references").at(0));
  }

  // Missing checkpoint is a configuration error; unknown split is a data
  // failure.
  CHECK(run_cmd(bin() + " evaluate --checkpoint " +
                (fx.root / "nope.sasckpt").string() + " --data " +
                fx.corpus.string() + " --split dev --out " +
                (fx.root / "z.json").string())
            .code == 2);
  CHECK(run_cmd(bin() + " evaluate --checkpoint " + fx.checkpoint() +
                " --data " + fx.corpus.string() + " --split bogus --out " +
                (fx.root / "z.json").string())
            .code == 1);
}

TEST_CASE("top-level flag handling") {
  CHECK(run_cmd(bin()).code == 2);
  CHECK(run_cmd(bin() + " --help").code == 0);
  CHECK(run_cmd(bin() + " frobnicate").code == 2);
  CHECK(run_cmd(bin() + " gen-corpus --no-such-flag 1").code == 2);
  CHECK(run_cmd(bin() + " train --data x").code == 2);  // missing --out
}

// src/cli.cc

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

#include "sas/cli.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "sas/alignment_io.h"
#include "sas/checkpoint.h"
#include "sas/evaluate.h"
#include "sas/mel_io.h"
#include "sas/nn/tape.h"
#include "sas/run_config.h"
#include "sas/trainer.h"
#include "sas/wav_io.h"

namespace sas {

namespace fs = std::filesystem;

namespace {

std::string resolve_manifest_path(const std::string& data) {
  if (fs::is_directory(data)) return (fs::path(data) / "manifest.json").string();
  return data;
}

void require_file(const std::string& path, const std::string& what) {
  require_config(fs::is_regular_file(path), what + " not found: " + path);
}

// Rebuilds a model from a checkpoint's embedded config snapshot.
Model model_from_checkpoint(const LoadedCheckpoint& ck) {
  Model model;
  model.init(model_config_from_snapshot(ck.config_json), /*seed=*/0);
  restore_model(ck, model);
  return model;
}

}  // namespace

int run_command(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const SasError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_gen_corpus(const GeneratorConfig& cfg) {
  cfg.validate();
  generate_synthetic_corpus(cfg);
  const std::string manifest = (fs::path(cfg.out_dir) / "manifest.json").string();
  std::printf("%s\n", manifest.c_str());
  return 0;
}

int cmd_train(const TrainCommand& cmd) {
  RunConfig rc;
  if (!cmd.config_path.empty()) rc = parse_run_config_file(cmd.config_path);
  for (const std::string& o : cmd.overrides) apply_override(rc, o);
  env_num_workers();

  const CorpusManifest manifest =
      load_manifest(resolve_manifest_path(cmd.data));
  Model model;
  model.init(rc.model, rc.trainer.seed);
  Trainer trainer(model, rc.trainer, rc.losses, rc.audio);
  fs::create_directories(cmd.out_dir);

  if (!cmd.resume.empty()) {
    require_file(cmd.resume, "checkpoint");
    const LoadedCheckpoint ck = load_checkpoint(cmd.resume);
    trainer.fit(manifest, cmd.out_dir, &ck);
  } else {
    trainer.fit(manifest, cmd.out_dir, nullptr);
  }
  std::printf("%s\n",
              (fs::path(cmd.out_dir) / "checkpoint_final.sasckpt").string()
                  .c_str());
  return 0;
}

int cmd_synthesize(const SynthesizeCommand& cmd) {
  require_file(cmd.checkpoint, "checkpoint");
  const LoadedCheckpoint ck = load_checkpoint(cmd.checkpoint);
  const AudioConfig ac = audio_config_from_snapshot(ck.config_json);
  Model model = model_from_checkpoint(ck);
  env_num_workers();

  std::vector<fs::path> files;
  if (fs::is_directory(cmd.features)) {
    for (const auto& e : fs::directory_iterator(cmd.features)) {
      if (e.is_regular_file() && e.path().extension() == ".rf")
        files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    require(!files.empty(),
            "synthesize: no .rf feature files in " + cmd.features);
  } else {
    require_file(cmd.features, "feature file");
    files.emplace_back(cmd.features);
  }
  fs::create_directories(cmd.out_dir);

  int failed = 0;
  for (const fs::path& file : files) {
    try {
      const RegionFeatureSet rfs = load_region_features(file.string());
      nn::Tape tape(/*grad_enabled=*/false);
      const Encoder::Output enc = model.encoder.encode(tape, rfs);
      const Decoder::InferResult inf =
          model.decoder.infer_greedy(tape, enc.memory);

      MelSpectrogram mel;
      mel.frames = inf.mel_post;
      mel.hop_length = ac.hop_length;
      mel.sample_rate = ac.sample_rate;
      const Waveform wave = griffin_lim(mel, ac);

      const std::string stem = file.stem().string();
      const fs::path out(cmd.out_dir);
      write_wav((out / (stem + ".wav")).string(), wave);
      write_mel((out / (stem + ".mel")).string(), mel);
      write_alignment((out / (stem + ".align")).string(), inf.alignments,
                      inf.truncated);
      std::printf("%s: %ld frames, %zu samples%s\n", stem.c_str(),
                  static_cast<long>(mel.frames.rows()), wave.samples.size(),
                  inf.truncated ? " (truncated)" : "");
    } catch (const SasError& e) {
      std::fprintf(stderr, "error: %s: %s\n", file.string().c_str(),
                   e.what());
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}

int cmd_evaluate(const EvaluateCommand& cmd) {
  require_file(cmd.checkpoint, "checkpoint");
  const LoadedCheckpoint ck = load_checkpoint(cmd.checkpoint);
  const ModelConfig mc = model_config_from_snapshot(ck.config_json);
  const AudioConfig ac = audio_config_from_snapshot(ck.config_json);
  const TrainConfig tc = train_config_from_snapshot(ck.config_json);
  const FeatureMode mode = feature_mode_from_name(tc.feature_mode);
  Model model = model_from_checkpoint(ck);

  const CorpusManifest manifest =
      load_manifest(resolve_manifest_path(cmd.data));
  const SplitRecord& rec = manifest.split(cmd.split);

  TranscribeFn transcribe;
  std::size_t oracle_next = 0;
  if (cmd.oracle_transcriber) {
    // Upper-bound run: returns each entry's first caption verbatim.
    transcribe = [&rec, &oracle_next](const Mat&) {
      const ManifestEntry& e = rec.entries[oracle_next++ % rec.entries.size()];
      return e.captions.front().tokens;
    };
  } else {
    transcribe = make_template_transcriber(build_token_signature_bank(
        manifest.seed, manifest.vocab, manifest.frames_per_token, mc.n_mels,
        ac.log_floor));
  }

  const EvalResult res =
      evaluate_split(model, manifest, cmd.split, mode, transcribe);

  const fs::path out_path(cmd.out_path);
  if (out_path.has_parent_path())
    fs::create_directories(out_path.parent_path());
  std::ofstream out(out_path);
  if (!out.good())
    throw IoError("evaluate: cannot open " + cmd.out_path);
  out << eval_result_to_json(res);
  require(out.good(), "evaluate: write failed for " + cmd.out_path);

  std::fputs(report_table(res.report).c_str(), stdout);
  return 0;
}

}  // namespace sas

// tools/sas_main.cc

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

#include "CLI11.hpp"
#include "sas/cli.h"

int main(int argc, char** argv) {
  CLI::App app{"sas: image-to-speech synthesis toolkit"};
  app.require_subcommand(1);

  sas::GeneratorConfig gen;
  CLI::App* g = app.add_subcommand(
      "gen-corpus", "Generate a synthetic region-feature + speech corpus");
  g->add_option("--seed", gen.seed, "Corpus seed");
  g->add_option("--vocab-size", gen.vocab_size, "Vocabulary size (>= 2)");
  g->add_option("--images", gen.n_images, "Number of images (>= 10)");
  g->add_option("--captions", gen.captions_per_image,
                "Captions per image (1..5)");
  g->add_option("--noise-std", gen.noise_std, "Log-mel rendering noise");
  g->add_option("--frames-per-token", gen.frames_per_token,
                "Mel frames per token signature");
  g->add_option("--n-mels", gen.n_mels, "Mel channels");
  g->add_option("--log-floor", gen.log_floor, "Mel amplitude floor");
  g->add_option("--split-train", gen.split_train, "Train fraction");
  g->add_option("--split-dev", gen.split_dev, "Dev fraction");
  g->add_option("--split-test", gen.split_test, "Test fraction");
  g->add_option("--out", gen.out_dir, "Output corpus directory")->required();

  sas::TrainCommand tr;
  CLI::App* t = app.add_subcommand("train", "Train a model on a corpus");
  t->add_option("--config", tr.config_path,
                "INI run configuration (defaults apply when omitted)");
  t->add_option("--data", tr.data, "Corpus manifest.json or its directory")
      ->required();
  t->add_option("--out", tr.out_dir, "Run directory for checkpoints and log")
      ->required();
  t->add_option("--resume", tr.resume, "Checkpoint to continue from");
  t->add_option("--override", tr.overrides,
                "Config override section.key=value (repeatable)");

  sas::SynthesizeCommand sy;
  CLI::App* s = app.add_subcommand(
      "synthesize", "Synthesize speech from region feature files");
  s->add_option("--checkpoint", sy.checkpoint, "Trained checkpoint")
      ->required();
  s->add_option("--features", sy.features,
                "One .rf feature file or a directory of them")
      ->required();
  s->add_option("--out", sy.out_dir, "Output directory")->required();

  sas::EvaluateCommand ev;
  CLI::App* e = app.add_subcommand(
      "evaluate", "Synthesize a split, transcribe it, and score captions");
  e->add_option("--checkpoint", ev.checkpoint, "Trained checkpoint")
      ->required();
  e->add_option("--data", ev.data, "Corpus manifest.json or its directory")
      ->required();
  e->add_option("--split", ev.split, "Split name (default test)");
  e->add_option("--out", ev.out_path, "Evaluation JSON output path")
      ->required();
  e->add_flag("--oracle-transcriber", ev.oracle_transcriber,
              "Replace the transcriber with one returning the first "
              "reference caption (metric upper bound)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  return sas::run_command([&]() {
    if (g->parsed()) return sas::cmd_gen_corpus(gen);
    if (t->parsed()) return sas::cmd_train(tr);
    if (s->parsed()) return sas::cmd_synthesize(sy);
    return sas::cmd_evaluate(ev);
  });
}

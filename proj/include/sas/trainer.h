// include/sas/trainer.h

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

#ifndef SAS_TRAINER_H_
#define SAS_TRAINER_H_

#include <string>

#include "sas/adam.h"
#include "sas/batch.h"
#include "sas/checkpoint.h"
#include "sas/losses.h"
#include "sas/model/model.h"
#include "sas/train_config.h"

namespace sas {

struct StepStats {
  int iter = 0;
  double lr = 0.0;
  double tf_ratio = 0.0;
  double grad_norm = 0.0;
  LossBreakdown losses;
};

// Owns the optimization loop. One training iteration processes one minibatch:
// each item gets its own graph truncated to its caption length, the batch
// level normalizers and the cross-modal term couple the items, and every
// graph is swept once with explicit seeds before a single Adam step.
class Trainer {
 public:
  Trainer(Model& model, const TrainConfig& train_cfg,
          const LossWeights& weights, const AudioConfig& audio_cfg);

  StepStats train_step(const TrainingBatch& batch, int iter);

  // Teacher-forced losses over a whole split, normalized globally (all valid
  // cells of the split together, not per batch).
  LossBreakdown eval_split(const CorpusManifest& manifest,
                           const std::string& split);

  // Full loop: per-epoch reshuffles, one JSONL log line per iteration plus
  // dev records, checkpoints at iteration 0, every checkpoint_interval, and
  // at the end. resume restores parameters and optimizer state and continues
  // from the checkpoint's iteration with the identical batch stream.
  void fit(const CorpusManifest& manifest, const std::string& out_dir,
           const LoadedCheckpoint* resume = nullptr);

  Adam& adam() { return adam_; }
  const TrainConfig& config() const { return cfg_; }
  std::string config_snapshot() const;

 private:
  Model& model_;
  TrainConfig cfg_;
  LossWeights weights_;
  AudioConfig audio_;
  Adam adam_;
};

}  // namespace sas

#endif  // SAS_TRAINER_H_

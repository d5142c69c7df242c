// include/sas/checkpoint.h

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

#ifndef SAS_CHECKPOINT_H_
#define SAS_CHECKPOINT_H_

#include <cstdint>
#include <map>
#include <string>

#include "sas/adam.h"
#include "sas/audio.h"
#include "sas/common.h"
#include "sas/losses.h"
#include "sas/model/model.h"
#include "sas/train_config.h"

namespace sas {

// Checkpoint container format, magic "SASCKPT1".  Parameter and optimizer
// tensors are stored as float32; save_checkpoint quantizes the live model in
// place so that a resumed run replays the exact same arithmetic as a run that
// never stopped.
struct LoadedCheckpoint {
  std::uint64_t iteration = 0;
  std::uint64_t adam_step = 0;
  std::string config_json;
  std::map<std::string, Mat> blobs;  // keys "param/<name>", "adam_m/<name>", "adam_v/<name>"
};

// Serializes the full run configuration to a canonical JSON snapshot string.
std::string make_config_snapshot(const ModelConfig& model_cfg,
                                 const LossWeights& weights,
                                 const TrainConfig& train_cfg,
                                 const AudioConfig& audio_cfg);

// Typed accessors over a snapshot string.
ModelConfig model_config_from_snapshot(const std::string& config_json);
LossWeights loss_weights_from_snapshot(const std::string& config_json);
TrainConfig train_config_from_snapshot(const std::string& config_json);
AudioConfig audio_config_from_snapshot(const std::string& config_json);

// Writes model parameters (and optimizer moments when adam is non-null) to
// path.  Quantizes the live tensors to float32 first.
void save_checkpoint(const std::string& path, Model& model, Adam* adam,
                     std::uint64_t iteration, const std::string& config_json);

LoadedCheckpoint load_checkpoint(const std::string& path);

// Copies parameter blobs into an already initialized model.  The snapshot
// model configuration must match the live one exactly.
void restore_model(const LoadedCheckpoint& ckpt, Model& model);

// Copies optimizer moment blobs and the step counter into adam.  The
// optimizer must already be bound to the model's parameters.
void restore_adam(const LoadedCheckpoint& ckpt, Adam& adam);

}  // namespace sas

#endif  // SAS_CHECKPOINT_H_

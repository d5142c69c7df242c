// include/sas/model/speech_embedder.h

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

#ifndef SAS_MODEL_SPEECH_EMBEDDER_H_
#define SAS_MODEL_SPEECH_EMBEDDER_H_

#include <vector>

#include "sas/model/config.h"
#include "sas/nn/layers.h"

namespace sas {

// Maps a mel spectrogram to the shared embedding space: strided conv with
// ReLU, two bidirectional GRU layers (direction outputs concatenated), then
// a mean over time. Output width is 2 * embedder_gru_hidden = proj2_units.
struct SpeechEmbedder {
  ModelConfig cfg;
  nn::Conv1d conv;
  nn::GRUCell fwd1, bwd1, fwd2, bwd2;

  void init(const ModelConfig& config, Rng& rng);
  // mel is T x n_mels with T >= 1, raw mel units.
  int embed(nn::Tape& t, const Mat& mel);
  std::vector<nn::Param*> params();

 private:
  int bigru(nn::Tape& t, int x, nn::GRUCell& fwd, nn::GRUCell& bwd);
};

}  // namespace sas

#endif  // SAS_MODEL_SPEECH_EMBEDDER_H_

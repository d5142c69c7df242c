// include/sas/model/model.h

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

#ifndef SAS_MODEL_MODEL_H_
#define SAS_MODEL_MODEL_H_

#include <string>
#include <vector>

#include "sas/model/decoder.h"
#include "sas/model/encoder.h"
#include "sas/model/speech_embedder.h"

namespace sas {

// The full synthesis system. Parameter order (encoder, decoder, embedder,
// each module in declaration order) is the canonical order used by the
// optimizer and checkpoints.
struct Model {
  ModelConfig cfg;
  Encoder encoder;
  Decoder decoder;
  SpeechEmbedder embedder;

  void init(const ModelConfig& config, std::uint64_t seed);
  std::vector<nn::Param*> params();
  nn::Param* find(const std::string& name);
  std::size_t n_scalars();
};

}  // namespace sas

#endif  // SAS_MODEL_MODEL_H_

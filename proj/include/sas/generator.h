// include/sas/generator.h

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

#ifndef SAS_GENERATOR_H_
#define SAS_GENERATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sas/manifest.h"
#include "sas/signature_bank.h"

namespace sas {

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int vocab_size = 20;       // structural tokens plus object tokens
  int n_images = 100;        // >= 10
  int captions_per_image = 1;  // 1..5
  double split_train = 0.8;
  double split_dev = 0.1;
  double split_test = 0.1;
  double noise_std = 0.0;    // log-mel noise on rendered speech
  int frames_per_token = 8;
  int n_mels = 80;
  double log_floor = 1e-5;
  std::string out_dir;

  void validate() const;
};

// Object token index -> detector class id, fixed pseudo-random mapping.
int object_class_id(int object_token_index);

// Vocabulary layout: min(4, vocab_size - 1) structural tokens drawn in order
// from {"a", "and", "on", "with"}, then object tokens "obj0", "obj1", ...
std::vector<std::string> build_vocab(int vocab_size);

// Caption for a sorted object-token list; caption_index rotates the object
// order and shifts the glue words, keeping the object set unchanged.
std::vector<std::string> caption_template(
    const std::vector<std::string>& vocab, int n_structural,
    const std::vector<int>& object_token_indices, int caption_index);

// Writes region features (bottom-up and fixed-grid variants), rendered mel
// spectrograms, and manifest.json under cfg.out_dir. Fully determined by the
// config: the same config yields byte-identical files.
CorpusManifest generate_synthetic_corpus(const GeneratorConfig& cfg);

}  // namespace sas

#endif  // SAS_GENERATOR_H_

// include/sas/signature_bank.h

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

#ifndef SAS_SIGNATURE_BANK_H_
#define SAS_SIGNATURE_BANK_H_

#include <string>
#include <vector>

#include "sas/common.h"
#include "sas/rng.h"

namespace sas {

// Each vocabulary token owns a fixed K x n_mels log-mel signature; captions
// are rendered by concatenating signatures. Signature cells sit at the log
// floor or one nat above it, so rendered mels respect the floor invariant and
// any two tokens stay at least `separation_margin` apart in Euclidean
// distance (enforced by rejection resampling).
struct TokenSignatureBank {
  std::vector<std::string> vocab;
  std::vector<Mat> signatures;  // per token, K x n_mels
  Mat silence;                  // K x n_mels, all at the floor
  int frames_per_token = 8;
  int n_mels = 80;
  double log_floor_value = 0.0;  // log(log_floor)
  double separation_margin = 4.0;

  int vocab_size() const { return static_cast<int>(vocab.size()); }
  int token_index(const std::string& token) const;  // -1 if unknown
};

TokenSignatureBank build_token_signature_bank(
    std::uint64_t seed, const std::vector<std::string>& vocab,
    int frames_per_token, int n_mels, double log_floor,
    double separation_margin = 4.0);

// Concatenates token signatures, adds Gaussian noise of noise_std, and clamps
// at the log floor. Result has frames_per_token * tokens.size() frames.
Mat render_caption_speech(const std::vector<std::string>& tokens,
                          const TokenSignatureBank& bank, double noise_std,
                          Rng& rng);

}  // namespace sas

#endif  // SAS_SIGNATURE_BANK_H_

// src/transcriber.cc

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

#include "sas/transcriber.h"

#include <utility>

namespace sas {

std::vector<std::string> template_transcribe(const Mat& mel,
                                             const TokenSignatureBank& bank) {
  require(bank.vocab_size() > 0, "transcriber: empty signature bank");
  require(mel.rows() == 0 || mel.cols() == bank.n_mels,
          "transcriber: spectrogram width does not match the bank");
  const int k = bank.frames_per_token;
  const int n_windows = static_cast<int>(mel.rows()) / k;

  std::vector<std::string> tokens;
  tokens.reserve(static_cast<std::size_t>(n_windows));
  for (int w = 0; w < n_windows; ++w) {
    const Mat window = mel.middleRows(w * k, k);
    int best = 0;
    double best_d = (window - bank.signatures[0]).squaredNorm();
    for (int j = 1; j < bank.vocab_size(); ++j) {
      const double d =
          (window - bank.signatures[static_cast<std::size_t>(j)]).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if ((window - bank.silence).squaredNorm() < best_d) break;
    tokens.push_back(bank.vocab[static_cast<std::size_t>(best)]);
  }
  return tokens;
}

TranscribeFn make_template_transcriber(TokenSignatureBank bank) {
  return [bank = std::move(bank)](const Mat& mel) {
    return template_transcribe(mel, bank);
  };
}

}  // namespace sas

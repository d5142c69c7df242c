// src/signature_bank.cc

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

#include "sas/signature_bank.h"

#include <cmath>

namespace sas {

int TokenSignatureBank::token_index(const std::string& token) const {
  for (int i = 0; i < vocab_size(); ++i)
    if (vocab[i] == token) return i;
  return -1;
}

TokenSignatureBank build_token_signature_bank(
    std::uint64_t seed, const std::vector<std::string>& vocab,
    int frames_per_token, int n_mels, double log_floor,
    double separation_margin) {
  require_config(!vocab.empty(), "signature bank needs a non-empty vocab");
  require_config(frames_per_token >= 1, "frames_per_token must be >= 1");
  require_config(n_mels >= 1, "n_mels must be >= 1");
  require_config(log_floor > 0.0, "log_floor must be positive");
  require_config(separation_margin > 0.0, "separation_margin must be > 0");

  TokenSignatureBank bank;
  bank.vocab = vocab;
  bank.frames_per_token = frames_per_token;
  bank.n_mels = n_mels;
  bank.log_floor_value = std::log(log_floor);
  bank.separation_margin = separation_margin;
  bank.silence =
      Mat::Constant(frames_per_token, n_mels, bank.log_floor_value);

  Rng rng = Rng(seed).fork("signatures");
  bank.signatures.reserve(vocab.size());
  for (std::size_t v = 0; v < vocab.size(); ++v) {
    for (int attempt = 0;; ++attempt) {
      require(attempt < 10000,
              "signature bank: could not separate token " + vocab[v]);
      Mat sig(frames_per_token, n_mels);
      for (int t = 0; t < frames_per_token; ++t)
        for (int m = 0; m < n_mels; ++m)
          sig(t, m) = bank.log_floor_value + (rng.bernoulli(0.5) ? 1.0 : 0.0);
      bool ok = (sig - bank.silence).norm() >= separation_margin;
      for (std::size_t u = 0; ok && u < v; ++u)
        ok = (sig - bank.signatures[u]).norm() >= separation_margin;
      if (ok) {
        bank.signatures.push_back(std::move(sig));
        break;
      }
    }
  }
  return bank;
}

Mat render_caption_speech(const std::vector<std::string>& tokens,
                          const TokenSignatureBank& bank, double noise_std,
                          Rng& rng) {
  require(!tokens.empty(), "render_caption_speech: empty token list");
  require(noise_std >= 0.0, "render_caption_speech: negative noise_std");
  const int k = bank.frames_per_token;
  Mat mel(k * static_cast<int>(tokens.size()), bank.n_mels);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const int idx = bank.token_index(tokens[i]);
    require(idx >= 0,
                  "render_caption_speech: token not in vocab: " + tokens[i]);
    mel.middleRows(static_cast<int>(i) * k, k) = bank.signatures[idx];
  }
  if (noise_std > 0.0) {
    for (int t = 0; t < mel.rows(); ++t)
      for (int m = 0; m < mel.cols(); ++m)
        mel(t, m) += noise_std * rng.normal();
  }
  return mel.cwiseMax(bank.log_floor_value);
}

}  // namespace sas

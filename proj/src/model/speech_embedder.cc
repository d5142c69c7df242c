// src/model/speech_embedder.cc

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

#include "sas/model/speech_embedder.h"

#include <algorithm>
#include <cmath>

namespace sas {

void SpeechEmbedder::init(const ModelConfig& config, Rng& rng) {
  cfg = config;
  cfg.validate();
  conv.init("embedder.conv", cfg.n_mels, cfg.embedder_conv_filters,
            cfg.embedder_conv_kernel, cfg.embedder_conv_stride, rng);
  fwd1.init("embedder.fwd1", cfg.embedder_conv_filters,
            cfg.embedder_gru_hidden, rng);
  bwd1.init("embedder.bwd1", cfg.embedder_conv_filters,
            cfg.embedder_gru_hidden, rng);
  fwd2.init("embedder.fwd2", 2 * cfg.embedder_gru_hidden,
            cfg.embedder_gru_hidden, rng);
  bwd2.init("embedder.bwd2", 2 * cfg.embedder_gru_hidden,
            cfg.embedder_gru_hidden, rng);
}

int SpeechEmbedder::bigru(nn::Tape& t, int x, nn::GRUCell& fwd,
                          nn::GRUCell& bwd) {
  const int frames = static_cast<int>(t.value(x).rows());
  std::vector<int> fwd_rows, bwd_rows;
  fwd_rows.reserve(frames);
  bwd_rows.reserve(frames);
  int h = t.constant(Mat::Zero(1, cfg.embedder_gru_hidden));
  for (int s = 0; s < frames; ++s) {
    h = fwd.step(t, t.row(x, s), h);
    fwd_rows.push_back(h);
  }
  h = t.constant(Mat::Zero(1, cfg.embedder_gru_hidden));
  for (int s = frames - 1; s >= 0; --s) {
    h = bwd.step(t, t.row(x, s), h);
    bwd_rows.push_back(h);
  }
  std::reverse(bwd_rows.begin(), bwd_rows.end());
  return t.hcat({t.vcat(fwd_rows), t.vcat(bwd_rows)});
}

int SpeechEmbedder::embed(nn::Tape& t, const Mat& mel) {
  require(mel.rows() >= 1, "speech embedder: empty spectrogram");
  require(mel.cols() == cfg.n_mels,
          "speech embedder: channel count mismatch");
  require(all_finite(mel), "speech embedder: non-finite input");
  const double floor_value = std::log(cfg.log_floor);
  Mat shifted = mel;
  shifted.array() -= floor_value;
  const int centered = t.constant(std::move(shifted));
  const int conv_out = t.relu(conv.apply(t, centered));
  const int l1 = bigru(t, conv_out, fwd1, bwd1);
  const int l2 = bigru(t, l1, fwd2, bwd2);
  return t.mean_rows(l2);
}

std::vector<nn::Param*> SpeechEmbedder::params() {
  std::vector<nn::Param*> out;
  for (auto* p : conv.params()) out.push_back(p);
  for (auto* p : fwd1.params()) out.push_back(p);
  for (auto* p : bwd1.params()) out.push_back(p);
  for (auto* p : fwd2.params()) out.push_back(p);
  for (auto* p : bwd2.params()) out.push_back(p);
  return out;
}

}  // namespace sas

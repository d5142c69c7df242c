// src/model/decoder.cc

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

#include "sas/model/decoder.h"

#include <cmath>

namespace sas {

void Decoder::init(const ModelConfig& config, Rng& rng) {
  cfg = config;
  cfg.validate();
  const double floor_value = std::log(cfg.log_floor);
  prenet1.init("decoder.prenet1", cfg.n_mels, cfg.prenet_units, rng);
  prenet2.init("decoder.prenet2", cfg.prenet_units, cfg.prenet_units, rng);
  lstm1.init("decoder.lstm1", cfg.prenet_units + cfg.proj2_units,
             cfg.rnn_units, rng);
  lstm2.init("decoder.lstm2", cfg.rnn_units, cfg.rnn_units, rng);
  attn_query.init("decoder.attn_query", cfg.rnn_units, cfg.attn_dim, rng);
  attn_memory.name = "decoder.attn_memory";
  attn_memory.value = nn::glorot_uniform(cfg.proj2_units, cfg.attn_dim,
                                         cfg.proj2_units, cfg.attn_dim, rng);
  attn_location.name = "decoder.attn_location";
  attn_location.value =
      nn::glorot_uniform(cfg.location_filters, cfg.attn_dim,
                         cfg.location_filters, cfg.attn_dim, rng);
  attn_v.name = "decoder.attn_v";
  attn_v.value = nn::glorot_uniform(cfg.attn_dim, 1, cfg.attn_dim, 1, rng);
  location_conv.init("decoder.location_conv", 2, cfg.location_filters,
                     cfg.location_kernel, 1, rng);
  frame_proj.init("decoder.frame_proj", cfg.rnn_units + cfg.proj2_units,
                  cfg.n_mels, rng);
  // Untrained output sits at the mel floor; the stop gate starts biased
  // toward continuing.
  frame_proj.b.value.setConstant(floor_value);
  stop_proj.init("decoder.stop_proj", cfg.rnn_units + cfg.proj2_units, 1, rng);
  stop_proj.b.value.setConstant(-2.0);

  postnet.clear();
  postnet.resize(cfg.postnet_layers);
  for (int i = 0; i < cfg.postnet_layers; ++i) {
    const int in = i == 0 ? cfg.n_mels : cfg.postnet_filters;
    const int out = i == cfg.postnet_layers - 1 ? cfg.n_mels
                                                : cfg.postnet_filters;
    postnet[i].init("decoder.postnet" + std::to_string(i), in, out,
                    cfg.postnet_kernel, 1, rng);
  }
}

std::vector<nn::Param*> Decoder::params() {
  std::vector<nn::Param*> out;
  for (auto* p : prenet1.params()) out.push_back(p);
  for (auto* p : prenet2.params()) out.push_back(p);
  for (auto* p : lstm1.params()) out.push_back(p);
  for (auto* p : lstm2.params()) out.push_back(p);
  for (auto* p : attn_query.params()) out.push_back(p);
  out.push_back(&attn_memory);
  out.push_back(&attn_location);
  out.push_back(&attn_v);
  for (auto* p : location_conv.params()) out.push_back(p);
  for (auto* p : frame_proj.params()) out.push_back(p);
  for (auto* p : stop_proj.params()) out.push_back(p);
  for (auto& conv : postnet)
    for (auto* p : conv.params()) out.push_back(p);
  return out;
}

Decoder::State Decoder::init_state(nn::Tape& t, int memory) {
  require(t.value(memory).rows() == cfg.n_regions &&
              t.value(memory).cols() == cfg.proj2_units,
          "decoder: memory shape mismatch");
  State s;
  s.prev_frame = t.constant(Mat::Zero(1, cfg.n_mels));
  s.h1 = t.constant(Mat::Zero(1, cfg.rnn_units));
  s.c1 = t.constant(Mat::Zero(1, cfg.rnn_units));
  s.h2 = t.constant(Mat::Zero(1, cfg.rnn_units));
  s.c2 = t.constant(Mat::Zero(1, cfg.rnn_units));
  s.attn_weights =
      t.constant(Mat::Constant(1, cfg.n_regions, 1.0 / cfg.n_regions));
  s.attn_weights_cum = t.constant(Mat::Zero(1, cfg.n_regions));
  s.context = t.matmul(s.attn_weights, memory);
  return s;
}

int Decoder::project_memory(nn::Tape& t, int memory) {
  return t.matmul(memory, t.param(attn_memory));
}

Decoder::StepOutput Decoder::decode_step(nn::Tape& t, State& state, int memory,
                                         int mem_proj, int input_frame,
                                         bool train, Rng& rng) {
  const double floor_value = std::log(cfg.log_floor);
  const int centered = t.sub(
      input_frame, t.constant(Mat::Constant(1, cfg.n_mels, floor_value)));
  int x = t.relu(prenet1.apply(t, centered));
  x = nn::dropout(t, x, cfg.prenet_dropout, rng, train);
  x = t.relu(prenet2.apply(t, x));
  x = nn::dropout(t, x, cfg.prenet_dropout, rng, train);

  const int rnn_in = t.hcat({x, state.context});
  auto [h1, c1] = lstm1.step(t, rnn_in, state.h1, state.c1);
  auto [h2, c2] = lstm2.step(t, h1, state.h2, state.c2);
  state.h1 = h1;
  state.c1 = c1;
  state.h2 = h2;
  state.c2 = c2;

  // Location-sensitive attention refreshed once per step with h2 as query.
  const int loc_in = t.hcat(
      {t.transpose(state.attn_weights), t.transpose(state.attn_weights_cum)});
  const int loc_feat = location_conv.apply(t, loc_in);
  const int loc_proj = t.matmul(loc_feat, t.param(attn_location));
  const int query_proj = attn_query.apply(t, state.h2);
  const int scores = t.tanh_(t.add_rowvec(t.add(mem_proj, loc_proj),
                                          query_proj));
  const int energies = t.transpose(t.matmul(scores, t.param(attn_v)));
  if (!all_finite(t.value(energies)))
    throw NumericalError(
        "decoder: non-finite attention energies (|max| seen " +
        std::to_string(t.value(energies).cwiseAbs().maxCoeff()) + ")");
  state.attn_weights = t.softmax_rows(energies);
  state.attn_weights_cum = t.add(state.attn_weights_cum, state.attn_weights);
  state.context = t.matmul(state.attn_weights, memory);

  const int y_ctx = t.hcat({state.h2, state.context});
  StepOutput out;
  out.frame_pre = frame_proj.apply(t, y_ctx);
  out.stop_logit = stop_proj.apply(t, y_ctx);
  state.prev_frame = out.frame_pre;
  return out;
}

int Decoder::postnet_refine(nn::Tape& t, int mel_pre) {
  int h = mel_pre;
  for (int i = 0; i < cfg.postnet_layers; ++i) {
    h = postnet[static_cast<std::size_t>(i)].apply(t, h);
    if (i + 1 < cfg.postnet_layers) h = t.tanh_(h);
  }
  return t.add(mel_pre, h);
}

Decoder::UnrollResult Decoder::unroll_teacher_forced(
    nn::Tape& t, int memory, const Mat& target,
    const std::vector<bool>& feed_mask, bool train, Rng& rng) {
  const int frames = static_cast<int>(target.rows());
  require(frames >= 1, "decoder: teacher-forced unroll needs T >= 1 frames");
  require(target.cols() == cfg.n_mels,
          "decoder: target channel count mismatch");
  require(static_cast<int>(feed_mask.size()) == frames,
          "decoder: feed_mask length must match target frames");

  State state = init_state(t, memory);
  const int mem_proj = project_memory(t, memory);
  std::vector<int> frame_nodes, stop_nodes;
  frame_nodes.reserve(frames);
  stop_nodes.reserve(frames);
  UnrollResult result;
  result.alignments = Mat::Zero(frames, cfg.n_regions);
  for (int s = 0; s < frames; ++s) {
    int input = state.prev_frame;
    if (s > 0 && feed_mask[static_cast<std::size_t>(s)])
      input = t.constant(target.row(s - 1));
    StepOutput step = decode_step(t, state, memory, mem_proj, input, train,
                                  rng);
    frame_nodes.push_back(step.frame_pre);
    stop_nodes.push_back(step.stop_logit);
    result.alignments.row(s) = t.value(state.attn_weights);
  }
  result.mel_pre = t.vcat(frame_nodes);
  result.mel_post = postnet_refine(t, result.mel_pre);
  result.stop_logits = t.vcat(stop_nodes);
  return result;
}

Decoder::InferResult Decoder::infer_greedy(nn::Tape& t, int memory) {
  State state = init_state(t, memory);
  const int mem_proj = project_memory(t, memory);
  Rng rng(0);  // inference never draws
  std::vector<int> frame_nodes;
  std::vector<double> stop_probs;
  std::vector<Mat> aligns;
  InferResult result;
  result.truncated = true;
  for (int s = 0; s < cfg.max_frames; ++s) {
    StepOutput step = decode_step(t, state, memory, mem_proj,
                                  state.prev_frame, false, rng);
    frame_nodes.push_back(step.frame_pre);
    aligns.push_back(t.value(state.attn_weights));
    const double logit = t.value(step.stop_logit)(0, 0);
    const double prob = 1.0 / (1.0 + std::exp(-logit));
    stop_probs.push_back(prob);
    if (prob > cfg.stop_threshold) {
      result.truncated = false;
      break;
    }
  }
  const int emitted = static_cast<int>(frame_nodes.size());
  const int mel_pre = t.vcat(frame_nodes);
  const int mel_post = postnet_refine(t, mel_pre);
  result.mel_pre = t.value(mel_pre);
  result.mel_post = t.value(mel_post);
  result.alignments = Mat::Zero(emitted, cfg.n_regions);
  for (int s = 0; s < emitted; ++s) result.alignments.row(s) = aligns[s];
  result.stop_probs = Eigen::Map<const Vec>(stop_probs.data(), emitted);
  return result;
}

}  // namespace sas

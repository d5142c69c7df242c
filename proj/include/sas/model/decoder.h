// include/sas/model/decoder.h

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

#ifndef SAS_MODEL_DECODER_H_
#define SAS_MODEL_DECODER_H_

#include <vector>

#include "sas/model/config.h"
#include "sas/nn/layers.h"

namespace sas {

// Attention-guided autoregressive mel decoder. Inputs are centered by the
// log floor before the prenet; the frame projection bias starts at the floor
// so an untrained model emits near-silence. The location-sensitive attention
// convolves the current and cumulative weights, and the postnet adds a
// residual refinement over the whole predicted sequence.
struct Decoder {
  ModelConfig cfg;
  nn::Linear prenet1, prenet2;
  nn::LSTMCell lstm1, lstm2;
  nn::Linear attn_query;     // rnn_units -> attn_dim, carries the shared bias
  nn::Param attn_memory;     // proj2_units x attn_dim
  nn::Param attn_location;   // location_filters x attn_dim
  nn::Param attn_v;          // attn_dim x 1
  nn::Conv1d location_conv;  // 2 -> location_filters
  nn::Linear frame_proj;     // (rnn_units + proj2_units) -> n_mels
  nn::Linear stop_proj;      // (rnn_units + proj2_units) -> 1
  std::vector<nn::Conv1d> postnet;

  void init(const ModelConfig& config, Rng& rng);
  std::vector<nn::Param*> params();

  // All handles live on the tape driving the current sequence.
  struct State {
    int prev_frame;        // 1 x n_mels, raw mel units
    int h1, c1, h2, c2;    // 1 x rnn_units
    int context;           // 1 x proj2_units
    int attn_weights;      // 1 x n_regions, sums to 1
    int attn_weights_cum;  // 1 x n_regions, running sum
  };

  struct StepOutput {
    int frame_pre;   // 1 x n_mels
    int stop_logit;  // 1 x 1
  };

  struct UnrollResult {
    int mel_pre;      // T x n_mels
    int mel_post;     // T x n_mels
    int stop_logits;  // T x 1
    Mat alignments;   // T x n_regions attention weights
  };

  struct InferResult {
    Mat mel_pre;
    Mat mel_post;
    Mat alignments;
    Vec stop_probs;
    bool truncated = false;  // hit max_frames without a stop decision
  };

  // Zero frames and recurrent state, uniform attention, zero cumulative
  // weights, context formed with the uniform weights.
  State init_state(nn::Tape& t, int memory);

  // Hoists the memory-side attention projection; compute once per sequence.
  int project_memory(nn::Tape& t, int memory);

  StepOutput decode_step(nn::Tape& t, State& state, int memory, int mem_proj,
                         int input_frame, bool train, Rng& rng);

  // Residual postnet over the full predicted sequence.
  int postnet_refine(nn::Tape& t, int mel_pre);

  // Teacher-forced unroll over target (T x n_mels, T >= 1). Step s > 0 reads
  // target row s-1 when feed_mask[s] is true, otherwise the model's own
  // previous pre-postnet frame (gradient flows through it). Step 0 always
  // starts from the go frame.
  UnrollResult unroll_teacher_forced(nn::Tape& t, int memory, const Mat& target,
                                     const std::vector<bool>& feed_mask,
                                     bool train, Rng& rng);

  // Greedy synthesis: steps until sigmoid(stop) exceeds stop_threshold (the
  // deciding frame is kept) or max_frames is hit, then refines once.
  InferResult infer_greedy(nn::Tape& t, int memory);
};

}  // namespace sas

#endif  // SAS_MODEL_DECODER_H_

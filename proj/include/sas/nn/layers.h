// include/sas/nn/layers.h

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

#ifndef SAS_NN_LAYERS_H_
#define SAS_NN_LAYERS_H_

#include <string>
#include <utility>
#include <vector>

#include "sas/nn/tape.h"
#include "sas/rng.h"

namespace sas {
namespace nn {

Mat glorot_uniform(int rows, int cols, int fan_in, int fan_out, Rng& rng);

struct Linear {
  Param W;  // in x out
  Param b;  // 1 x out

  void init(const std::string& name, int in, int out, Rng& rng);
  int apply(Tape& t, int x);
  std::vector<Param*> params() { return {&W, &b}; }
};

// Single-step LSTM cell, gate order i, f, g, o.  The forget-gate slice of
// the bias starts at 1 so early training does not flush state.
struct LSTMCell {
  Param W_ih;  // in x 4H
  Param W_hh;  // H x 4H
  Param b;     // 1 x 4H
  int hidden = 0;

  void init(const std::string& name, int in, int hidden_dim, Rng& rng);
  // (h, c) -> (h', c'), all 1 x H row vectors.
  std::pair<int, int> step(Tape& t, int x, int h, int c);
  std::vector<Param*> params() { return {&W_ih, &W_hh, &b}; }
};

// Single-step GRU cell with the reset gate applied to the hidden-side
// candidate term (n = tanh(W_in x + b_in + r * (W_hn h + b_hn))).
struct GRUCell {
  Param W_ih;  // in x 3H
  Param W_hh;  // H x 3H
  Param b_ih;  // 1 x 3H
  Param b_hh;  // 1 x 3H
  int hidden = 0;

  void init(const std::string& name, int in, int hidden_dim, Rng& rng);
  int step(Tape& t, int x, int h);
  std::vector<Param*> params() { return {&W_ih, &W_hh, &b_ih, &b_hh}; }
};

// 1-d convolution over a T x Cin sequence via im2col.  Odd kernel widths
// only; padding keeps ceil(T / stride) output rows.
struct Conv1d {
  Param W;  // (k * in) x out
  Param b;  // 1 x out
  int k = 1;
  int stride = 1;

  void init(const std::string& name, int in_channels, int out_channels,
            int kernel, int stride_len, Rng& rng);
  int apply(Tape& t, int x);
  std::vector<Param*> params() { return {&W, &b}; }
};

// Inverted dropout.  Identity when train is false or rate is zero.
int dropout(Tape& t, int x, double rate, Rng& rng, bool train);

}  // namespace nn
}  // namespace sas

#endif  // SAS_NN_LAYERS_H_

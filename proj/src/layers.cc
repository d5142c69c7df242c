// src/layers.cc

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

#include "sas/nn/layers.h"

#include <cmath>

namespace sas {
namespace nn {

Mat glorot_uniform(int rows, int cols, int fan_in, int fan_out, Rng& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-limit, limit);
  return m;
}

void Linear::init(const std::string& name, int in, int out, Rng& rng) {
  W.name = name + ".W";
  W.value = glorot_uniform(in, out, in, out, rng);
  b.name = name + ".b";
  b.value = Mat::Zero(1, out);
}

int Linear::apply(Tape& t, int x) {
  return t.add_rowvec(t.matmul(x, t.param(W)), t.param(b));
}

void LSTMCell::init(const std::string& name, int in, int hidden_dim,
                    Rng& rng) {
  hidden = hidden_dim;
  W_ih.name = name + ".W_ih";
  W_ih.value = glorot_uniform(in, 4 * hidden, in, hidden, rng);
  W_hh.name = name + ".W_hh";
  W_hh.value = glorot_uniform(hidden, 4 * hidden, hidden, hidden, rng);
  b.name = name + ".b";
  b.value = Mat::Zero(1, 4 * hidden);
  b.value.middleCols(hidden, hidden).setOnes();
}

std::pair<int, int> LSTMCell::step(Tape& t, int x, int h, int c) {
  int gates = t.add_rowvec(
      t.add(t.matmul(x, t.param(W_ih)), t.matmul(h, t.param(W_hh))),
      t.param(b));
  int i = t.sigmoid(t.slice_cols(gates, 0, hidden));
  int f = t.sigmoid(t.slice_cols(gates, hidden, hidden));
  int g = t.tanh_(t.slice_cols(gates, 2 * hidden, hidden));
  int o = t.sigmoid(t.slice_cols(gates, 3 * hidden, hidden));
  int c_new = t.add(t.mul(f, c), t.mul(i, g));
  int h_new = t.mul(o, t.tanh_(c_new));
  return {h_new, c_new};
}

void GRUCell::init(const std::string& name, int in, int hidden_dim, Rng& rng) {
  hidden = hidden_dim;
  W_ih.name = name + ".W_ih";
  W_ih.value = glorot_uniform(in, 3 * hidden, in, hidden, rng);
  W_hh.name = name + ".W_hh";
  W_hh.value = glorot_uniform(hidden, 3 * hidden, hidden, hidden, rng);
  b_ih.name = name + ".b_ih";
  b_ih.value = Mat::Zero(1, 3 * hidden);
  b_hh.name = name + ".b_hh";
  b_hh.value = Mat::Zero(1, 3 * hidden);
}

int GRUCell::step(Tape& t, int x, int h) {
  int gi = t.add_rowvec(t.matmul(x, t.param(W_ih)), t.param(b_ih));
  int gh = t.add_rowvec(t.matmul(h, t.param(W_hh)), t.param(b_hh));
  int r = t.sigmoid(t.add(t.slice_cols(gi, 0, hidden),
                          t.slice_cols(gh, 0, hidden)));
  int z = t.sigmoid(t.add(t.slice_cols(gi, hidden, hidden),
                          t.slice_cols(gh, hidden, hidden)));
  int n = t.tanh_(t.add(t.slice_cols(gi, 2 * hidden, hidden),
                        t.mul(r, t.slice_cols(gh, 2 * hidden, hidden))));
  int one = t.constant(Mat::Ones(1, hidden));
  return t.add(t.mul(t.sub(one, z), n), t.mul(z, h));
}

void Conv1d::init(const std::string& name, int in_channels, int out_channels,
                  int kernel, int stride_len, Rng& rng) {
  require(kernel % 2 == 1, "conv1d: kernel width must be odd");
  k = kernel;
  stride = stride_len;
  W.name = name + ".W";
  W.value = glorot_uniform(k * in_channels, out_channels, k * in_channels,
                           out_channels, rng);
  b.name = name + ".b";
  b.value = Mat::Zero(1, out_channels);
}

int Conv1d::apply(Tape& t, int x) {
  int pad = (k - 1) / 2;
  int cols = t.im2col(x, k, stride, pad, pad);
  return t.add_rowvec(t.matmul(cols, t.param(W)), t.param(b));
}

int dropout(Tape& t, int x, double rate, Rng& rng, bool train) {
  if (!train || rate <= 0.0) return x;
  require(rate < 1.0, "dropout: rate must be below 1");
  const Mat& v = t.value(x);
  double keep = 1.0 - rate;
  Mat mask(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j)
      mask(i, j) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
  return t.mul_const(x, mask);
}

}  // namespace nn
}  // namespace sas

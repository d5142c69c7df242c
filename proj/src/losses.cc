// src/losses.cc

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

#include "sas/losses.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sas {

namespace {

double stable_softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// m(i, j) = 1 where j participates in row i's log-sum-exp: the positive pair
// itself plus every candidate not masked out as a known positive.
Mat lse_mask(const Mat& match_mask) {
  const int b = static_cast<int>(match_mask.rows());
  Mat m = Mat::Zero(b, b);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j)
      m(i, j) = (i == j || match_mask(i, j) == 0.0) ? 1.0 : 0.0;
  return m;
}

double directional_mms(const Mat& a, const Mat& m) {
  const int b = static_cast<int>(a.rows());
  double total = 0.0;
  for (int i = 0; i < b; ++i) {
    double max_v = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < b; ++j)
      if (m(i, j) != 0.0) max_v = std::max(max_v, a(i, j));
    double acc = 0.0;
    for (int j = 0; j < b; ++j)
      if (m(i, j) != 0.0) acc += std::exp(a(i, j) - max_v);
    total += max_v + std::log(acc) - a(i, i);
  }
  return total / b;
}

void check_mms_shapes(const Mat& image_vecs, const Mat& speech_vecs,
                      const Mat& match_mask) {
  const int b = static_cast<int>(image_vecs.rows());
  require(b >= 1, "mms_loss: empty batch");
  require(speech_vecs.rows() == b && speech_vecs.cols() == image_vecs.cols(),
          "mms_loss: embedding shape mismatch");
  require(match_mask.rows() == b && match_mask.cols() == b,
          "mms_loss: match_mask must be B x B");
}

}  // namespace

double spectrogram_loss(const Mat& mel_pre, const Mat& mel_post,
                        const Mat& target, const Mat& frame_mask) {
  const int frames = static_cast<int>(target.rows());
  const int channels = static_cast<int>(target.cols());
  require(mel_pre.rows() == frames && mel_pre.cols() == channels &&
              mel_post.rows() == frames && mel_post.cols() == channels,
          "spectrogram_loss: prediction shape mismatch");
  require(frame_mask.rows() == frames && frame_mask.cols() == 1,
          "spectrogram_loss: frame_mask must be T x 1");
  const double n_frames_valid = frame_mask.sum();
  require(n_frames_valid > 0.0, "spectrogram_loss: zero valid frames");
  const double n_cells = n_frames_valid * channels;
  double sse_pre = 0.0, sse_post = 0.0;
  for (int f = 0; f < frames; ++f) {
    if (frame_mask(f, 0) == 0.0) continue;
    sse_pre += (mel_pre.row(f) - target.row(f)).squaredNorm();
    sse_post += (mel_post.row(f) - target.row(f)).squaredNorm();
  }
  return sse_pre / n_cells + sse_post / n_cells;
}

double stop_token_loss(const Mat& logits, const Mat& targets, const Mat& mask,
                       double pos_weight) {
  const int frames = static_cast<int>(logits.rows());
  require(logits.cols() == 1 && targets.rows() == frames &&
              targets.cols() == 1 && mask.rows() == frames && mask.cols() == 1,
          "stop_token_loss: inputs must be T x 1");
  double num = 0.0;
  const double den = stop_weight_sum(targets, mask, pos_weight);
  require(den > 0.0, "stop_token_loss: zero valid frames");
  for (int f = 0; f < frames; ++f) {
    if (mask(f, 0) == 0.0) continue;
    const double x = logits(f, 0), target = targets(f, 0);
    const double w = 1.0 + (pos_weight - 1.0) * target;
    num += w * (stable_softplus(x) - x * target);
  }
  return num / den;
}

double stop_weight_sum(const Mat& targets, const Mat& mask,
                       double pos_weight) {
  double den = 0.0;
  for (int f = 0; f < targets.rows(); ++f)
    if (mask(f, 0) != 0.0)
      den += 1.0 + (pos_weight - 1.0) * targets(f, 0);
  return den;
}

double mms_loss(const Mat& image_vecs, const Mat& speech_vecs, double margin,
                const Mat& match_mask) {
  check_mms_shapes(image_vecs, speech_vecs, match_mask);
  Mat a = image_vecs * speech_vecs.transpose();
  a.diagonal().array() -= margin;
  const Mat m = lse_mask(match_mask);
  return 0.5 * (directional_mms(a, m) +
                directional_mms(a.transpose(), m.transpose()));
}

int masked_sse_node(nn::Tape& t, int pred, const Mat& target,
                    const Mat& frame_mask) {
  require(frame_mask.rows() == target.rows() && frame_mask.cols() == 1,
          "masked_sse_node: frame_mask must be T x 1");
  const Mat cell_mask = frame_mask.replicate(1, target.cols());
  const int diff = t.sub(pred, t.constant(target));
  return t.sum(t.mul_const(t.square(diff), cell_mask));
}

int stop_bce_sum_node(nn::Tape& t, int logits, const Mat& targets,
                      const Mat& mask, double pos_weight) {
  require(targets.cols() == 1 && mask.cols() == 1 &&
              targets.rows() == mask.rows(),
          "stop_bce_sum_node: targets and mask must be T x 1");
  const Mat weights =
      (mask.array() * (1.0 + (pos_weight - 1.0) * targets.array())).matrix();
  const int bce = t.sub(t.softplus(logits), t.mul_const(logits, targets));
  return t.sum(t.mul_const(bce, weights));
}

int mms_loss_node(nn::Tape& t, int image_vecs, int speech_vecs, double margin,
                  const Mat& match_mask) {
  check_mms_shapes(t.value(image_vecs), t.value(speech_vecs), match_mask);
  const int b = static_cast<int>(match_mask.rows());
  const int scores = t.matmul(image_vecs, t.transpose(speech_vecs));
  const int a = t.sub(scores,
                      t.constant(margin * Mat::Identity(b, b)));
  const int pos = t.diag(a);  // B x 1
  const Mat m = lse_mask(match_mask);
  const int loss_fwd = t.sum(t.sub(t.logsumexp_rows(a, m), pos));
  const int loss_bwd =
      t.sum(t.sub(t.logsumexp_rows(t.transpose(a), m.transpose()), pos));
  return t.scale(t.add(loss_fwd, loss_bwd), 0.5 / b);
}

}  // namespace sas

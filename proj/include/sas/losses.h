// include/sas/losses.h

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

#ifndef SAS_LOSSES_H_
#define SAS_LOSSES_H_

#include "sas/common.h"
#include "sas/nn/tape.h"

namespace sas {

struct LossWeights {
  double lambda_ec = 0.25;
  double stop_positive_weight = 5.0;
  double mms_margin = 1.0;
};

struct LossBreakdown {
  double spectrogram = 0.0;  // L_s
  double stop = 0.0;         // L_st
  double embedding = 0.0;    // L_ec
  double total = 0.0;        // L_s + L_st + lambda_ec * L_ec
};

// Eager (no-tape) losses; the trainer uses these for dev evaluation and the
// tests pin them against hand-worked examples.
//
// Masked MSE of both decoder outputs against the target, averaged over valid
// cells (frame_mask is T x 1). Zero valid frames is an input error.
double spectrogram_loss(const Mat& mel_pre, const Mat& mel_post,
                        const Mat& target, const Mat& frame_mask);
// Masked BCE with logits (T x 1 each); positives weighted by pos_weight and
// the mean taken over mask * weight.
double stop_token_loss(const Mat& logits, const Mat& targets, const Mat& mask,
                       double pos_weight);
// Masked margin softmax over both retrieval directions, mean over the batch.
// match_mask (B x B) marks known positive pairs excluded from the negatives;
// its diagonal is implicitly on.
double mms_loss(const Mat& image_vecs, const Mat& speech_vecs, double margin,
                const Mat& match_mask);

// Tape builders used by the trainer. Sums are left unnormalized so the batch
// loop can seed cross-item normalizers explicitly.
//
// sum(mask * (pred - target)^2), 1 x 1 node; frame_mask is T x 1.
int masked_sse_node(nn::Tape& t, int pred, const Mat& target,
                    const Mat& frame_mask);
// sum(mask * weight * bce(logits, targets)), 1 x 1 node. The matching
// denominator sum(mask * weight) comes from stop_weight_sum.
int stop_bce_sum_node(nn::Tape& t, int logits, const Mat& targets,
                      const Mat& mask, double pos_weight);
double stop_weight_sum(const Mat& targets, const Mat& mask, double pos_weight);
// Full MMS loss as a node over embedding matrices (B x D each).
int mms_loss_node(nn::Tape& t, int image_vecs, int speech_vecs, double margin,
                  const Mat& match_mask);

}  // namespace sas

#endif  // SAS_LOSSES_H_

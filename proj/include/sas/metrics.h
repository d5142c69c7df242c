// include/sas/metrics.h

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

#ifndef SAS_METRICS_H_
#define SAS_METRICS_H_

#include <string>
#include <vector>

#include "sas/common.h"

namespace sas {

using Tokens = std::vector<std::string>;
// One candidate per item; one or more references per item.
using TokenCorpus = std::vector<Tokens>;
using RefCorpus = std::vector<std::vector<Tokens>>;

struct BleuScores {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
};

// Caption metric suite on the conventional scales: BLEU, METEOR and ROUGE-L
// on 0-100, CIDEr-D on its native 0-10.
struct MetricReport {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
  double meteor = 0.0;
  double rouge = 0.0;
  double cider = 0.0;
};

// Lowercases, strips punctuation to spaces, splits on whitespace.
Tokens tokenize_caption(const std::string& text);

// Corpus-level BLEU with clipped modified precision, geometric mean over
// orders 1..k for Bk, and the brevity penalty computed from per-item closest
// reference lengths (ties broken toward the shorter reference).
BleuScores bleu(const TokenCorpus& candidates, const RefCorpus& references);

// Exact-surface-match METEOR: per item the best reference score, where an
// alignment maximizes unigram matches and then minimizes chunks;
// F = 10PR/(R + 9P), penalty 0.5*(chunks/matches)^3. Mean over items, x100.
double meteor_exact(const TokenCorpus& candidates, const RefCorpus& references);

// LCS F-measure with beta weighting recall, best reference per item, mean
// over items, x100.
double rouge_l(const TokenCorpus& candidates, const RefCorpus& references,
               double beta = 1.2);

// CIDEr-D: orders 1..4, TF-IDF with idf = log(N/max(1,df)) over per-image
// reference sets, clipped cosine per reference with the Gaussian length
// penalty (sigma 6), averaged over orders and references, mean over items,
// x10. When an order's idf weights vanish corpus-wide the clipped cosine is
// taken on raw counts instead.
double cider_d(const TokenCorpus& candidates, const RefCorpus& references);

MetricReport score_all(const TokenCorpus& candidates,
                       const RefCorpus& references);

}  // namespace sas

#endif  // SAS_METRICS_H_

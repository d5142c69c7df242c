// include/sas/evaluate.h

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

#ifndef SAS_EVALUATE_H_
#define SAS_EVALUATE_H_

#include <string>
#include <vector>

#include "sas/batch.h"
#include "sas/manifest.h"
#include "sas/metrics.h"
#include "sas/model/model.h"
#include "sas/transcriber.h"

namespace sas {

struct EvalItem {
  std::string image_id;
  Tokens candidate;
  std::vector<Tokens> references;
  bool truncated = false;  // synthesis hit the frame cap
  std::string error;       // nonempty when this item failed
};

struct EvalResult {
  std::vector<EvalItem> items;
  MetricReport report;
};

// Synthesizes every image of the split with greedy inference, transcribes
// the refined spectrogram, and scores the transcripts against the split's
// captions. Per-item failures are recorded on the item (empty candidate)
// and never abort the corpus.
EvalResult evaluate_split(Model& model, const CorpusManifest& manifest,
                          const std::string& split, FeatureMode mode,
                          const TranscribeFn& transcribe);

// {"per_image": [...], "report": {...}} with a trailing newline.
std::string eval_result_to_json(const EvalResult& result);

// Two fixed-width console lines: the metric header and the scores in the
// conventional column order B1 B2 B3 B4 M R C.
std::string report_table(const MetricReport& report);

}  // namespace sas

#endif  // SAS_EVALUATE_H_

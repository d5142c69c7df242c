// src/evaluate.cc

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

#include "sas/evaluate.h"

#include <cstdio>

#include "json.hpp"
#include "sas/nn/tape.h"

namespace sas {

EvalResult evaluate_split(Model& model, const CorpusManifest& manifest,
                          const std::string& split, FeatureMode mode,
                          const TranscribeFn& transcribe) {
  const SplitRecord& rec = manifest.split(split);
  require(!rec.entries.empty(), "evaluate: split " + split + " is empty");

  EvalResult result;
  result.items.reserve(rec.entries.size());
  for (const ManifestEntry& entry : rec.entries) {
    EvalItem item;
    item.image_id = entry.image_id;
    for (const CaptionRecord& cap : entry.captions)
      item.references.push_back(cap.tokens);
    try {
      const std::string& rel = mode == FeatureMode::kBaselineGrid
                                   ? entry.grid_feature_path
                                   : entry.feature_path;
      require(!rel.empty(), "evaluate: entry " + entry.image_id +
                                " has no features for this mode");
      const RegionFeatureSet rfs =
          load_region_features(join_path(manifest.root_dir, rel));
      nn::Tape t(/*grad_enabled=*/false);
      const Encoder::Output enc = model.encoder.encode(t, rfs);
      const Decoder::InferResult inf = model.decoder.infer_greedy(t, enc.memory);
      item.truncated = inf.truncated;
      item.candidate = transcribe(inf.mel_post);
    } catch (const SasError& e) {
      item.candidate.clear();
      item.error = e.what();
    }
    result.items.push_back(std::move(item));
  }

  TokenCorpus candidates;
  RefCorpus references;
  candidates.reserve(result.items.size());
  references.reserve(result.items.size());
  for (const EvalItem& item : result.items) {
    candidates.push_back(item.candidate);
    references.push_back(item.references);
  }
  result.report = score_all(candidates, references);
  return result;
}

std::string eval_result_to_json(const EvalResult& result) {
  nlohmann::ordered_json j;
  j["per_image"] = nlohmann::ordered_json::array();
  for (const EvalItem& item : result.items) {
    nlohmann::ordered_json ji;
    ji["image_id"] = item.image_id;
    ji["candidate"] = item.candidate;
    ji["references"] = item.references;
    ji["truncated"] = item.truncated;
    if (!item.error.empty()) ji["error"] = item.error;
    j["per_image"].push_back(std::move(ji));
  }
  nlohmann::ordered_json jr;
  jr["B1"] = result.report.b1;
  jr["B2"] = result.report.b2;
  jr["B3"] = result.report.b3;
  jr["B4"] = result.report.b4;
  jr["M"] = result.report.meteor;
  jr["R"] = result.report.rouge;
  jr["C"] = result.report.cider;
  j["report"] = jr;
  return j.dump(2) + "\n";
}

std::string report_table(const MetricReport& report) {
  char buf[256];
  std::string out = "      B1      B2      B3      B4       M       R       C\n";
  std::snprintf(buf, sizeof(buf),
                "%8.2f%8.2f%8.2f%8.2f%8.2f%8.2f%8.3f\n", report.b1, report.b2,
                report.b3, report.b4, report.meteor, report.rouge,
                report.cider);
  out += buf;
  return out;
}

}  // namespace sas

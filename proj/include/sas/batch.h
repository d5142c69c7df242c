// include/sas/batch.h

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

#ifndef SAS_BATCH_H_
#define SAS_BATCH_H_

#include <optional>
#include <string>
#include <vector>

#include "sas/audio.h"
#include "sas/manifest.h"
#include "sas/region_features.h"

namespace sas {

enum class FeatureMode { kBottomUp, kBaselineGrid };

std::string feature_mode_name(FeatureMode mode);
FeatureMode feature_mode_from_name(const std::string& name);

// One training minibatch. Targets are padded to the longest caption in the
// batch with the log floor; frame_mask marks valid frames. Stop targets are 1
// at each caption's final valid frame and across its padding, 0 elsewhere.
struct TrainingBatch {
  std::vector<std::string> image_ids;
  std::vector<RegionFeatureSet> features;
  std::vector<Mat> target_mel;  // each t_max x n_mels
  std::vector<std::vector<std::string>> caption_tokens;
  std::vector<int> lengths;
  Mat frame_mask;    // B x t_max
  Mat stop_targets;  // B x t_max
  int t_max = 0;

  int size() const { return static_cast<int>(image_ids.size()); }
  // B x B, 1 where two items come from the same image (known positives).
  Mat match_mask() const;
};

// Streams shuffled (image, caption) pairs of one split as padded batches.
// Order is fully determined by shuffle_seed; the final batch may be short.
class BatchIterator {
 public:
  BatchIterator(const CorpusManifest& manifest, const std::string& split,
                int batch_size, std::uint64_t shuffle_seed,
                const AudioConfig& audio,
                FeatureMode mode = FeatureMode::kBottomUp);

  std::optional<TrainingBatch> next();
  void reset(std::uint64_t shuffle_seed);
  // Advances past n batches without loading them.
  void skip(int n_batches);
  int n_items() const { return static_cast<int>(items_.size()); }
  int n_batches() const;

 private:
  const CorpusManifest* manifest_;
  const SplitRecord* split_;
  int batch_size_;
  AudioConfig audio_;
  FeatureMode mode_;
  std::vector<std::pair<int, int>> items_;  // (entry index, caption index)
  std::size_t cursor_ = 0;
};

}  // namespace sas

#endif  // SAS_BATCH_H_

// src/batch.cc

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

#include "sas/batch.h"

#include <algorithm>
#include <cmath>

#include "sas/mel_io.h"
#include "sas/rng.h"

namespace sas {

std::string feature_mode_name(FeatureMode mode) {
  return mode == FeatureMode::kBottomUp ? "bottom-up" : "baseline-grid";
}

FeatureMode feature_mode_from_name(const std::string& name) {
  if (name == "bottom-up") return FeatureMode::kBottomUp;
  if (name == "baseline-grid") return FeatureMode::kBaselineGrid;
  throw ConfigError("unknown feature_mode '" + name +
                    "' (expected bottom-up or baseline-grid)");
}

Mat TrainingBatch::match_mask() const {
  const int b = size();
  Mat m = Mat::Zero(b, b);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j)
      if (image_ids[i] == image_ids[j]) m(i, j) = 1.0;
  return m;
}

BatchIterator::BatchIterator(const CorpusManifest& manifest,
                             const std::string& split, int batch_size,
                             std::uint64_t shuffle_seed,
                             const AudioConfig& audio, FeatureMode mode)
    : manifest_(&manifest),
      split_(&manifest.split(split)),
      batch_size_(batch_size),
      audio_(audio),
      mode_(mode) {
  require_config(batch_size_ >= 1, "batch_size must be >= 1");
  for (int e = 0; e < static_cast<int>(split_->entries.size()); ++e)
    for (int c = 0; c < static_cast<int>(split_->entries[e].captions.size());
         ++c)
      items_.emplace_back(e, c);
  require(!items_.empty(), "split '" + split + "' has no captions");
  reset(shuffle_seed);
}

void BatchIterator::reset(std::uint64_t shuffle_seed) {
  std::sort(items_.begin(), items_.end());
  Rng rng = Rng(shuffle_seed).fork("batch-order");
  rng.shuffle(items_);
  cursor_ = 0;
}

void BatchIterator::skip(int n_batches) {
  require(n_batches >= 0, "batch iterator: cannot skip a negative count");
  cursor_ = std::min(items_.size(),
                     cursor_ + static_cast<std::size_t>(n_batches) *
                                   static_cast<std::size_t>(batch_size_));
}

int BatchIterator::n_batches() const {
  return static_cast<int>((items_.size() + batch_size_ - 1) / batch_size_);
}

std::optional<TrainingBatch> BatchIterator::next() {
  if (cursor_ >= items_.size()) return std::nullopt;
  const std::size_t end =
      std::min(items_.size(), cursor_ + static_cast<std::size_t>(batch_size_));

  TrainingBatch batch;
  std::vector<Mat> mels;
  for (std::size_t k = cursor_; k < end; ++k) {
    const ManifestEntry& entry = split_->entries[items_[k].first];
    const CaptionRecord& cap = entry.captions[items_[k].second];
    const std::string& feat_rel = mode_ == FeatureMode::kBottomUp
                                      ? entry.feature_path
                                      : entry.grid_feature_path;
    batch.image_ids.push_back(entry.image_id);
    batch.features.push_back(
        load_region_features(join_path(manifest_->root_dir, feat_rel)));
    batch.caption_tokens.push_back(cap.tokens);
    MelSpectrogram mel =
        read_mel(join_path(manifest_->root_dir, cap.mel_path), audio_);
    require(mel.frames.rows() > 0,
            "empty mel spectrogram: " + cap.mel_path);
    batch.lengths.push_back(static_cast<int>(mel.frames.rows()));
    mels.push_back(std::move(mel.frames));
  }
  cursor_ = end;

  const int b = batch.size();
  batch.t_max = 0;
  for (int i = 0; i < b; ++i) batch.t_max = std::max(batch.t_max, batch.lengths[i]);
  const double floor_value = std::log(audio_.log_floor);
  batch.frame_mask = Mat::Zero(b, batch.t_max);
  batch.stop_targets = Mat::Zero(b, batch.t_max);
  for (int i = 0; i < b; ++i) {
    Mat padded = Mat::Constant(batch.t_max, audio_.n_mels, floor_value);
    padded.topRows(batch.lengths[i]) = mels[i];
    batch.target_mel.push_back(std::move(padded));
    for (int t = 0; t < batch.lengths[i]; ++t) batch.frame_mask(i, t) = 1.0;
    for (int t = batch.lengths[i] - 1; t < batch.t_max; ++t)
      batch.stop_targets(i, t) = 1.0;
  }
  return batch;
}

}  // namespace sas

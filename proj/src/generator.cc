// src/generator.cc

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

#include "sas/generator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "sas/mel_io.h"
#include "sas/region_features.h"
#include "sas/rng.h"

namespace sas {

namespace {

constexpr int kRegionsPerObject = 6;
constexpr int kMaxObjectsPerImage = 3;
constexpr double kProtoNoise = 0.1;

const char* kStructuralPool[] = {"a", "and", "on", "with"};

std::string image_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "img%05d", i);
  return buf;
}

// x1 in [0, 0.8] leaves room for the minimum box extent of 0.1.
void sample_box(Rng& rng, Mat& p, int row) {
  const double x1 = rng.uniform(0.0, 0.8);
  const double y1 = rng.uniform(0.0, 0.8);
  const double w = rng.uniform(0.1, 1.0 - x1);
  const double h = rng.uniform(0.1, 1.0 - y1);
  p(row, 0) = x1;
  p(row, 1) = y1;
  p(row, 2) = x1 + w;
  p(row, 3) = y1 + h;
  p(row, 4) = w * h;
}

class PrototypeBank {
 public:
  PrototypeBank(std::uint64_t seed, int dim) : seed_(seed), dim_(dim) {}
  const Mat& get(int class_id) {
    auto it = cache_.find(class_id);
    if (it != cache_.end()) return it->second;
    Mat proto = Rng(seed_)
                    .fork("proto", static_cast<std::uint64_t>(class_id))
                    .normal_matrix(1, dim_);
    return cache_.emplace(class_id, std::move(proto)).first->second;
  }

 private:
  std::uint64_t seed_;
  int dim_;
  std::map<int, Mat> cache_;
};

}  // namespace

void GeneratorConfig::validate() const {
  require_config(vocab_size >= 2, "generator: vocab_size must be >= 2");
  require_config(n_images >= 10, "generator: n_images must be >= 10");
  require_config(captions_per_image >= 1 && captions_per_image <= 5,
                 "generator: captions_per_image must be in [1, 5]");
  require_config(split_train > 0.0 && split_dev > 0.0 && split_test > 0.0,
                 "generator: split fractions must be positive");
  require_config(std::abs(split_train + split_dev + split_test - 1.0) < 1e-9,
                 "generator: split fractions must sum to 1");
  require_config(noise_std >= 0.0, "generator: noise_std must be >= 0");
  require_config(frames_per_token >= 1,
                 "generator: frames_per_token must be >= 1");
  require_config(n_mels >= 1, "generator: n_mels must be >= 1");
  require_config(log_floor > 0.0, "generator: log_floor must be positive");
  require_config(!out_dir.empty(), "generator: out_dir must be set");
}

int object_class_id(int object_token_index) {
  return (object_token_index * 37 + 11) % kNumClasses;
}

std::vector<std::string> build_vocab(int vocab_size) {
  require_config(vocab_size >= 2, "build_vocab: vocab_size must be >= 2");
  const int n_struct = std::min(4, vocab_size - 1);
  std::vector<std::string> vocab;
  for (int i = 0; i < n_struct; ++i) vocab.push_back(kStructuralPool[i]);
  for (int i = 0; i < vocab_size - n_struct; ++i)
    vocab.push_back("obj" + std::to_string(i));
  return vocab;
}

std::vector<std::string> caption_template(
    const std::vector<std::string>& vocab, int n_structural,
    const std::vector<int>& object_token_indices, int caption_index) {
  require(!object_token_indices.empty(), "caption_template: no objects");
  const int n = static_cast<int>(object_token_indices.size());
  std::vector<int> rotated(n);
  for (int i = 0; i < n; ++i)
    rotated[i] = object_token_indices[(i + caption_index) % n];

  // Glue words are the structural tokens after the article "a".
  std::vector<std::string> glues;
  for (int i = 1; i < n_structural; ++i) glues.push_back(vocab[i]);

  std::vector<std::string> tokens;
  if (n_structural >= 1) tokens.push_back(vocab[0]);
  for (int i = 0; i < n; ++i) {
    if (i > 0 && !glues.empty())
      tokens.push_back(glues[(caption_index + i - 1) % glues.size()]);
    const int v = n_structural + rotated[i];
    require(v < static_cast<int>(vocab.size()),
            "caption_template: object token index out of range");
    tokens.push_back(vocab[v]);
  }
  return tokens;
}

CorpusManifest generate_synthetic_corpus(const GeneratorConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  const fs::path root(cfg.out_dir);
  fs::create_directories(root / "features");
  fs::create_directories(root / "features_grid");
  fs::create_directories(root / "mels");

  const std::vector<std::string> vocab = build_vocab(cfg.vocab_size);
  const int n_struct = std::min(4, cfg.vocab_size - 1);
  const int n_object_tokens = cfg.vocab_size - n_struct;
  const TokenSignatureBank bank = build_token_signature_bank(
      cfg.seed, vocab, cfg.frames_per_token, cfg.n_mels, cfg.log_floor);

  PrototypeBank protos(cfg.seed, kFeatureDim);
  Rng root_rng(cfg.seed);

  AudioConfig audio;
  audio.n_mels = cfg.n_mels;
  audio.log_floor = cfg.log_floor;

  CorpusManifest manifest;
  manifest.seed = cfg.seed;
  manifest.frames_per_token = cfg.frames_per_token;
  manifest.noise_std = cfg.noise_std;
  manifest.vocab = vocab;

  std::vector<ManifestEntry> entries;
  entries.reserve(cfg.n_images);
  for (int i = 0; i < cfg.n_images; ++i) {
    const std::string id = image_name(i);
    Rng rng_img = root_rng.fork("image", i);

    // Latent objects: distinct object tokens, kept sorted so captions of the
    // same image agree on the canonical object order.
    const int max_obj = std::min(kMaxObjectsPerImage, n_object_tokens);
    const int n_obj = 1 + static_cast<int>(rng_img.uniform_int(max_obj));
    std::vector<int> all_tokens(n_object_tokens);
    for (int k = 0; k < n_object_tokens; ++k) all_tokens[k] = k;
    rng_img.shuffle(all_tokens);
    std::vector<int> objects(all_tokens.begin(), all_tokens.begin() + n_obj);
    std::sort(objects.begin(), objects.end());

    RegionFeatureSet rfs;
    rfs.image_id = id;
    rfs.f = Mat::Zero(kNumRegions, kFeatureDim);
    rfs.p = Mat::Zero(kNumRegions, 5);
    rfs.c.assign(kNumRegions, 0);
    rfs.s = Vec::Zero(kNumRegions);

    int row = 0;
    for (int o = 0; o < n_obj; ++o) {
      const int class_id = object_class_id(objects[o]);
      const Mat& proto = protos.get(class_id);
      for (int r = 0; r < kRegionsPerObject; ++r, ++row) {
        rfs.f.row(row) =
            proto + kProtoNoise * rng_img.normal_matrix(1, kFeatureDim);
        sample_box(rng_img, rfs.p, row);
        rfs.c[row] = class_id;
        rfs.s(row) = rng_img.uniform(0.9, 1.0);
      }
    }
    for (; row < kNumRegions; ++row) {
      rfs.f.row(row) = rng_img.normal_matrix(1, kFeatureDim);
      sample_box(rng_img, rfs.p, row);
      rfs.c[row] = static_cast<int>(rng_img.uniform_int(kNumClasses));
      rfs.s(row) = rng_img.uniform(0.05, 0.45);
    }

    // Shuffle rows so object regions are not always first.
    std::vector<int> order(kNumRegions);
    for (int k = 0; k < kNumRegions; ++k) order[k] = k;
    rng_img.shuffle(order);
    RegionFeatureSet shuffled = rfs;
    for (int k = 0; k < kNumRegions; ++k) {
      shuffled.f.row(k) = rfs.f.row(order[k]);
      shuffled.p.row(k) = rfs.p.row(order[k]);
      shuffled.c[k] = rfs.c[order[k]];
      shuffled.s(k) = rfs.s(order[k]);
    }
    shuffled.validate(id);
    const std::string feat_rel = "features/" + id + ".rf";
    write_region_features((root / feat_rel).string(), shuffled);

    // Fixed-grid variant: a 6x6 raster of cells whose features blend the
    // object prototypes by distance to a random object center, so object
    // identity is smeared across cells instead of isolated per region.
    RegionFeatureSet grid;
    grid.image_id = id;
    grid.f = Mat::Zero(kNumRegions, kFeatureDim);
    grid.p = Mat::Zero(kNumRegions, 5);
    grid.c.assign(kNumRegions, 0);
    grid.s = Vec::Constant(kNumRegions, 0.5);
    Rng rng_grid = root_rng.fork("grid", i);
    std::vector<std::pair<double, double>> centers(n_obj);
    for (int o = 0; o < n_obj; ++o)
      centers[o] = {rng_grid.uniform(), rng_grid.uniform()};
    for (int cell = 0; cell < kNumRegions; ++cell) {
      const int gr = cell / 6, gc = cell % 6;
      const double cx = (gc + 0.5) / 6.0, cy = (gr + 0.5) / 6.0;
      grid.p(cell, 0) = gc / 6.0;
      grid.p(cell, 1) = gr / 6.0;
      grid.p(cell, 2) = (gc + 1) / 6.0;
      grid.p(cell, 3) = (gr + 1) / 6.0;
      grid.p(cell, 4) = 1.0 / 36.0;
      Mat feat = 0.3 * rng_grid.normal_matrix(1, kFeatureDim);
      for (int o = 0; o < n_obj; ++o) {
        const double dx = cx - centers[o].first;
        const double dy = cy - centers[o].second;
        const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * 0.15 * 0.15));
        feat += w * protos.get(object_class_id(objects[o]));
      }
      grid.f.row(cell) = feat;
    }
    grid.validate(id + " (grid)");
    const std::string grid_rel = "features_grid/" + id + ".rf";
    write_region_features((root / grid_rel).string(), grid);

    ManifestEntry entry;
    entry.image_id = id;
    entry.feature_path = feat_rel;
    entry.grid_feature_path = grid_rel;
    for (int k = 0; k < cfg.captions_per_image; ++k) {
      CaptionRecord cap;
      cap.tokens = caption_template(vocab, n_struct, objects, k);
      Rng rng_mel = root_rng.fork("mel", static_cast<std::uint64_t>(i) * 8 + k);
      MelSpectrogram mel;
      mel.frames = render_caption_speech(cap.tokens, bank, cfg.noise_std,
                                         rng_mel);
      mel.hop_length = audio.hop_length;
      mel.sample_rate = audio.sample_rate;
      cap.mel_path = "mels/" + id + "_cap" + std::to_string(k) + ".mel";
      write_mel((root / cap.mel_path).string(), mel);
      entry.captions.push_back(std::move(cap));
    }
    entries.push_back(std::move(entry));
  }

  // Sequential split assignment keeps the partition reproducible.
  const int n_train =
      static_cast<int>(std::lround(cfg.split_train * cfg.n_images));
  const int n_dev = static_cast<int>(std::lround(cfg.split_dev * cfg.n_images));
  const int n_test = cfg.n_images - n_train - n_dev;
  require_config(n_train >= 1 && n_dev >= 1 && n_test >= 1,
                 "generator: each split must receive at least one image");
  SplitRecord train{"train", {}}, dev{"dev", {}}, test{"test", {}};
  for (int i = 0; i < cfg.n_images; ++i) {
    if (i < n_train)
      train.entries.push_back(entries[i]);
    else if (i < n_train + n_dev)
      dev.entries.push_back(entries[i]);
    else
      test.entries.push_back(entries[i]);
  }
  manifest.splits = {std::move(train), std::move(dev), std::move(test)};
  manifest.root_dir = root.string();
  save_manifest((root / "manifest.json").string(), manifest);
  return manifest;
}

}  // namespace sas

// src/model/encoder.cc

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

#include "sas/model/encoder.h"

namespace sas {

void ModelConfig::validate() const {
  require_config(n_regions >= 1, "model: n_regions must be >= 1");
  require_config(feature_dim >= 1, "model: feature_dim must be >= 1");
  require_config(n_classes >= 1, "model: n_classes must be >= 1");
  require_config(fuse_units >= 1, "model: fuse_units must be >= 1");
  require_config(proj1_units >= 1, "model: proj1_units must be >= 1");
  require_config(proj2_units >= 1, "model: proj2_units must be >= 1");
  require_config(n_mels >= 1, "model: n_mels must be >= 1");
  require_config(prenet_units >= 1, "model: prenet_units must be >= 1");
  require_config(attn_dim >= 1, "model: attn_dim must be >= 1");
  require_config(location_filters >= 1, "model: location_filters must be >= 1");
  require_config(location_kernel >= 1 && location_kernel % 2 == 1,
                 "model: location_kernel must be odd");
  require_config(rnn_units >= 1, "model: rnn_units must be >= 1");
  require_config(postnet_filters >= 1, "model: postnet_filters must be >= 1");
  require_config(postnet_kernel >= 1 && postnet_kernel % 2 == 1,
                 "model: postnet_kernel must be odd");
  require_config(postnet_layers >= 2, "model: postnet_layers must be >= 2");
  require_config(prenet_dropout >= 0.0 && prenet_dropout < 1.0,
                 "model: prenet_dropout must be in [0, 1)");
  require_config(stop_threshold > 0.0 && stop_threshold < 1.0,
                 "model: stop_threshold must be in (0, 1)");
  require_config(max_frames >= 1, "model: max_frames must be >= 1");
  require_config(embedder_conv_filters >= 1,
                 "model: embedder_conv_filters must be >= 1");
  require_config(
      embedder_conv_kernel >= 1 && embedder_conv_kernel % 2 == 1,
      "model: embedder_conv_kernel must be odd");
  require_config(embedder_conv_stride >= 1,
                 "model: embedder_conv_stride must be >= 1");
  require_config(embedder_gru_hidden >= 1,
                 "model: embedder_gru_hidden must be >= 1");
  require_config(2 * embedder_gru_hidden == proj2_units,
                 "model: embedder_gru_hidden must be proj2_units / 2 so image "
                 "and speech embeddings share one space");
  require_config(log_floor > 0.0, "model: log_floor must be positive");
}

void Encoder::init(const ModelConfig& config, Rng& rng) {
  cfg = config;
  cfg.validate();
  const int fuse_in = 5 + cfg.n_classes + 1;
  fc_fuse.init("encoder.fc_fuse", fuse_in, cfg.fuse_units, rng);
  proj1.init("encoder.proj1", cfg.feature_dim + cfg.fuse_units,
             cfg.proj1_units, rng);
  proj2.init("encoder.proj2", cfg.proj1_units, cfg.proj2_units, rng);
  global_proj.init("encoder.global_proj", cfg.proj2_units, cfg.proj2_units,
                   rng);
}

Encoder::Output Encoder::encode(nn::Tape& t, const RegionFeatureSet& rfs) {
  require(rfs.n_regions() == cfg.n_regions,
          "encoder: expected " + std::to_string(cfg.n_regions) +
              " regions, got " + std::to_string(rfs.n_regions()));
  require(rfs.f.cols() == cfg.feature_dim,
          "encoder: feature dim mismatch for " + rfs.image_id);
  for (int i = 0; i < cfg.n_regions; ++i)
    require(rfs.c[i] >= 0 && rfs.c[i] < cfg.n_classes,
            "encoder: class id out of range for " + rfs.image_id);

  const int w_fuse = t.param(fc_fuse.W);
  const int b_fuse = t.param(fc_fuse.b);
  const int fused =
      t.region_fuse(rfs.p, rfs.c, rfs.s, w_fuse, b_fuse, cfg.n_classes);
  const int appearance = t.constant(rfs.f);
  const int rows = t.hcat({appearance, fused});
  const int h1 = t.relu(proj1.apply(t, rows));
  const int memory = t.relu(proj2.apply(t, h1));
  const int pooled = t.mean_rows(memory);
  const int image_global = global_proj.apply(t, pooled);
  return {memory, image_global};
}

std::vector<nn::Param*> Encoder::params() {
  std::vector<nn::Param*> out;
  for (auto* p : fc_fuse.params()) out.push_back(p);
  for (auto* p : proj1.params()) out.push_back(p);
  for (auto* p : proj2.params()) out.push_back(p);
  for (auto* p : global_proj.params()) out.push_back(p);
  return out;
}

}  // namespace sas

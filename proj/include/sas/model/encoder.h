// include/sas/model/encoder.h

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

#ifndef SAS_MODEL_ENCODER_H_
#define SAS_MODEL_ENCODER_H_

#include <vector>

#include "sas/model/config.h"
#include "sas/nn/layers.h"
#include "sas/region_features.h"

namespace sas {

// Region-feature fusion encoder. Each region's geometry, class one-hot, and
// confidence pass through one affine fuse layer; the result is concatenated
// with the appearance feature and projected twice with ReLU into the
// attention memory. The image global vector is a projection of the mean
// memory row, so it is invariant to region order.
struct Encoder {
  ModelConfig cfg;
  nn::Linear fc_fuse;      // (5 + n_classes + 1) -> fuse_units, pure affine
  nn::Linear proj1;        // (feature_dim + fuse_units) -> proj1_units
  nn::Linear proj2;        // proj1_units -> proj2_units
  nn::Linear global_proj;  // proj2_units -> proj2_units

  void init(const ModelConfig& config, Rng& rng);

  struct Output {
    int memory;  // n_regions x proj2_units
    int image_global;  // 1 x proj2_units
  };
  Output encode(nn::Tape& t, const RegionFeatureSet& rfs);

  std::vector<nn::Param*> params();
};

}  // namespace sas

#endif  // SAS_MODEL_ENCODER_H_

// include/sas/region_features.h

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

#ifndef SAS_REGION_FEATURES_H_
#define SAS_REGION_FEATURES_H_

#include <string>
#include <vector>

#include "sas/common.h"

namespace sas {

constexpr int kNumRegions = 36;
constexpr int kFeatureDim = 2048;
constexpr int kNumClasses = 1601;

// One image's detector output: appearance features, box geometry
// (x1, y1, x2, y2, area ratio), class ids, and confidences.
struct RegionFeatureSet {
  std::string image_id;
  Mat f;               // l x d
  Mat p;               // l x 5
  std::vector<int> c;  // l class ids in [0, n_classes)
  Vec s;               // l confidences in [0, 1]

  int n_regions() const { return static_cast<int>(f.rows()); }
  void validate(const std::string& where) const;
};

// Binary format: magic "SASRF1", u32 l, u32 d, then f (l x d f32),
// p (l x 5 f32), c (l x u16), s (l x f32), little-endian.
void write_region_features(const std::string& path,
                           const RegionFeatureSet& rfs);
// Loads and validates; image_id is the file stem.
RegionFeatureSet load_region_features(const std::string& path);

}  // namespace sas

#endif  // SAS_REGION_FEATURES_H_

// include/sas/manifest.h

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

#ifndef SAS_MANIFEST_H_
#define SAS_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sas/common.h"

namespace sas {

struct CaptionRecord {
  std::vector<std::string> tokens;
  std::string mel_path;  // relative to the manifest directory
};

struct ManifestEntry {
  std::string image_id;
  std::string feature_path;       // bottom-up region features
  std::string grid_feature_path;  // fixed-grid variant of the same image
  std::vector<CaptionRecord> captions;
};

struct SplitRecord {
  std::string name;  // "train", "dev", "test"
  std::vector<ManifestEntry> entries;
};

// Corpus index. Paths inside are relative; root_dir (set on load, not
// serialized) is the directory holding the manifest file.
struct CorpusManifest {
  int schema_version = 1;
  std::uint64_t seed = 0;
  int frames_per_token = 8;
  double noise_std = 0.0;
  std::vector<std::string> vocab;
  std::vector<SplitRecord> splits;
  std::string root_dir;

  const SplitRecord& split(const std::string& name) const;
  int total_images() const;
};

void save_manifest(const std::string& path, const CorpusManifest& m);
CorpusManifest load_manifest(const std::string& path);

std::string join_path(const std::string& root, const std::string& rel);

}  // namespace sas

#endif  // SAS_MANIFEST_H_

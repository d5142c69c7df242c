// src/manifest.cc

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

#include "sas/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

namespace sas {

using json = nlohmann::ordered_json;

const SplitRecord& CorpusManifest::split(const std::string& name) const {
  for (const auto& s : splits)
    if (s.name == name) return s;
  throw InputError("manifest has no split named '" + name + "'");
}

int CorpusManifest::total_images() const {
  int n = 0;
  for (const auto& s : splits) n += static_cast<int>(s.entries.size());
  return n;
}

std::string join_path(const std::string& root, const std::string& rel) {
  if (root.empty()) return rel;
  return (std::filesystem::path(root) / rel).string();
}

void save_manifest(const std::string& path, const CorpusManifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["seed"] = m.seed;
  j["frames_per_token"] = m.frames_per_token;
  j["noise_std"] = m.noise_std;
  j["vocab"] = m.vocab;
  json splits = json::object();
  for (const auto& s : m.splits) {
    json entries = json::array();
    for (const auto& e : s.entries) {
      json je;
      je["image_id"] = e.image_id;
      je["feature_path"] = e.feature_path;
      je["grid_feature_path"] = e.grid_feature_path;
      json caps = json::array();
      for (const auto& c : e.captions) {
        json jc;
        jc["tokens"] = c.tokens;
        jc["mel_path"] = c.mel_path;
        caps.push_back(jc);
      }
      je["captions"] = caps;
      entries.push_back(je);
    }
    splits[s.name] = entries;
  }
  j["splits"] = splits;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open manifest for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("manifest write failed: " + path);
}

CorpusManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("manifest parse error in " + path + ": " + e.what());
  }
  CorpusManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    require_format(m.schema_version == 1,
                   path + ": unsupported schema_version " +
                       std::to_string(m.schema_version));
    m.seed = j.at("seed").get<std::uint64_t>();
    m.frames_per_token = j.at("frames_per_token").get<int>();
    m.noise_std = j.at("noise_std").get<double>();
    m.vocab = j.at("vocab").get<std::vector<std::string>>();
    for (const auto& [name, entries] : j.at("splits").items()) {
      SplitRecord s;
      s.name = name;
      for (const auto& je : entries) {
        ManifestEntry e;
        e.image_id = je.at("image_id").get<std::string>();
        e.feature_path = je.at("feature_path").get<std::string>();
        e.grid_feature_path = je.at("grid_feature_path").get<std::string>();
        for (const auto& jc : je.at("captions")) {
          CaptionRecord c;
          c.tokens = jc.at("tokens").get<std::vector<std::string>>();
          c.mel_path = jc.at("mel_path").get<std::string>();
          require_format(!c.tokens.empty(),
                         path + ": caption with no tokens in " + e.image_id);
          e.captions.push_back(std::move(c));
        }
        require_format(!e.captions.empty(),
                       path + ": image " + e.image_id + " has no captions");
        s.entries.push_back(std::move(e));
      }
      m.splits.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw FormatError("manifest field error in " + path + ": " + e.what());
  }
  require_format(m.frames_per_token >= 1,
                 path + ": frames_per_token must be >= 1");
  require_format(!m.vocab.empty(), path + ": empty vocab");
  std::set<std::string> seen;
  for (const auto& s : m.splits)
    for (const auto& e : s.entries)
      require_format(seen.insert(e.image_id).second,
                     path + ": image " + e.image_id +
                         " appears in more than one split");
  m.root_dir = std::filesystem::path(path).parent_path().string();
  return m;
}

}  // namespace sas

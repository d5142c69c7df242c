// src/model/model.cc

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

#include "sas/model/model.h"

#include <set>

namespace sas {

void Model::init(const ModelConfig& config, std::uint64_t seed) {
  cfg = config;
  cfg.validate();
  Rng root(seed);
  Rng enc_rng = root.fork("encoder");
  Rng dec_rng = root.fork("decoder");
  Rng emb_rng = root.fork("embedder");
  encoder.init(cfg, enc_rng);
  decoder.init(cfg, dec_rng);
  embedder.init(cfg, emb_rng);

  std::set<std::string> names;
  for (const auto* p : params())
    require(names.insert(p->name).second,
            "model: duplicate parameter name " + p->name);
}

std::vector<nn::Param*> Model::params() {
  std::vector<nn::Param*> out;
  for (auto* p : encoder.params()) out.push_back(p);
  for (auto* p : decoder.params()) out.push_back(p);
  for (auto* p : embedder.params()) out.push_back(p);
  return out;
}

nn::Param* Model::find(const std::string& name) {
  for (auto* p : params())
    if (p->name == name) return p;
  return nullptr;
}

std::size_t Model::n_scalars() {
  std::size_t n = 0;
  for (const auto* p : params())
    n += static_cast<std::size_t>(p->value.size());
  return n;
}

}  // namespace sas

// include/sas/run_config.h

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

#ifndef SAS_RUN_CONFIG_H_
#define SAS_RUN_CONFIG_H_

#include <string>

#include "sas/audio.h"
#include "sas/losses.h"
#include "sas/model/config.h"
#include "sas/train_config.h"

namespace sas {

// Full run configuration. Every field starts at its documented default; an
// INI-style file and command-line overrides assign into it by
// section.key name. Unknown sections or keys are rejected.
struct RunConfig {
  ModelConfig model;
  LossWeights losses;
  TrainConfig trainer;
  AudioConfig audio;
};

// Assigns one "section.key" to a parsed value. Throws ConfigError for an
// unknown name or an unparsable value.
void set_run_config_key(RunConfig& cfg, const std::string& section,
                        const std::string& key, const std::string& value);

// Applies one command-line override of the form section.key=value.
void apply_override(RunConfig& cfg, const std::string& assignment);

// Parses an INI-style file: [section] headers, key = value lines, blank
// lines and lines starting with '#' or ';' ignored.
RunConfig parse_run_config_file(const std::string& path);

}  // namespace sas

#endif  // SAS_RUN_CONFIG_H_

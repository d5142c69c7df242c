// include/sas/cli.h

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

#ifndef SAS_CLI_H_
#define SAS_CLI_H_

#include <functional>
#include <string>
#include <vector>

#include "sas/generator.h"

namespace sas {

struct TrainCommand {
  std::string config_path;  // INI run configuration; empty = all defaults
  std::string data;         // manifest.json or the corpus directory
  std::string out_dir;
  std::string resume;       // checkpoint to continue from
  std::vector<std::string> overrides;  // section.key=value
};

struct SynthesizeCommand {
  std::string checkpoint;
  std::string features;  // one .rf file or a directory of them
  std::string out_dir;
};

struct EvaluateCommand {
  std::string checkpoint;
  std::string data;
  std::string split = "test";
  std::string out_path;  // evaluation JSON
  bool oracle_transcriber = false;
};

// Subcommand bodies. They return the process exit code for success paths
// and throw SasError subtypes otherwise; run_command maps exceptions to
// the stable exit-code contract (0 ok, 1 runtime/data failure, 2 config).
int cmd_gen_corpus(const GeneratorConfig& cfg);
int cmd_train(const TrainCommand& cmd);
int cmd_synthesize(const SynthesizeCommand& cmd);
int cmd_evaluate(const EvaluateCommand& cmd);

int run_command(const std::function<int()>& body);

}  // namespace sas

#endif  // SAS_CLI_H_

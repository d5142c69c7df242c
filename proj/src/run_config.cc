// src/run_config.cc

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

#include "sas/run_config.h"

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace sas {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& name, const std::string& v) {
  throw ConfigError("run config: cannot parse value '" + v + "' for " + name);
}

int to_int(const std::string& name, const std::string& v) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) bad_value(name, v);
    return x;
  } catch (const std::logic_error&) {
    bad_value(name, v);
  }
}

std::uint64_t to_u64(const std::string& name, const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) bad_value(name, v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::logic_error&) {
    bad_value(name, v);
  }
}

double to_double(const std::string& name, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) bad_value(name, v);
    return x;
  } catch (const std::logic_error&) {
    bad_value(name, v);
  }
}

void set_model_key(ModelConfig& m, const std::string& key,
                   const std::string& v) {
  const std::string name = "model." + key;
  if (key == "n_regions") m.n_regions = to_int(name, v);
  else if (key == "feature_dim") m.feature_dim = to_int(name, v);
  else if (key == "n_classes") m.n_classes = to_int(name, v);
  else if (key == "fuse_units") m.fuse_units = to_int(name, v);
  else if (key == "proj1_units") m.proj1_units = to_int(name, v);
  else if (key == "proj2_units") m.proj2_units = to_int(name, v);
  else if (key == "n_mels") m.n_mels = to_int(name, v);
  else if (key == "prenet_units") m.prenet_units = to_int(name, v);
  else if (key == "attn_dim") m.attn_dim = to_int(name, v);
  else if (key == "location_filters") m.location_filters = to_int(name, v);
  else if (key == "location_kernel") m.location_kernel = to_int(name, v);
  else if (key == "rnn_units") m.rnn_units = to_int(name, v);
  else if (key == "postnet_filters") m.postnet_filters = to_int(name, v);
  else if (key == "postnet_kernel") m.postnet_kernel = to_int(name, v);
  else if (key == "postnet_layers") m.postnet_layers = to_int(name, v);
  else if (key == "prenet_dropout") m.prenet_dropout = to_double(name, v);
  else if (key == "stop_threshold") m.stop_threshold = to_double(name, v);
  else if (key == "max_frames") m.max_frames = to_int(name, v);
  else if (key == "embedder_conv_filters")
    m.embedder_conv_filters = to_int(name, v);
  else if (key == "embedder_conv_kernel")
    m.embedder_conv_kernel = to_int(name, v);
  else if (key == "embedder_conv_stride")
    m.embedder_conv_stride = to_int(name, v);
  else if (key == "embedder_gru_hidden")
    m.embedder_gru_hidden = to_int(name, v);
  else if (key == "log_floor") m.log_floor = to_double(name, v);
  else throw ConfigError("run config: unknown key " + name);
}

void set_losses_key(LossWeights& w, const std::string& key,
                    const std::string& v) {
  const std::string name = "losses." + key;
  if (key == "lambda_ec") w.lambda_ec = to_double(name, v);
  else if (key == "stop_positive_weight")
    w.stop_positive_weight = to_double(name, v);
  else if (key == "mms_margin") w.mms_margin = to_double(name, v);
  else throw ConfigError("run config: unknown key " + name);
}

void set_trainer_key(TrainConfig& t, const std::string& key,
                     const std::string& v) {
  const std::string name = "trainer." + key;
  if (key == "seed") t.seed = to_u64(name, v);
  else if (key == "batch_size") t.batch_size = to_int(name, v);
  else if (key == "max_iters") t.max_iters = to_int(name, v);
  else if (key == "peak_lr") t.peak_lr = to_double(name, v);
  else if (key == "warmup_iters") t.warmup_iters = to_int(name, v);
  else if (key == "decay_gamma") t.decay_gamma = to_double(name, v);
  else if (key == "ss_k") t.ss_k = to_double(name, v);
  else if (key == "eps_min") t.eps_min = to_double(name, v);
  else if (key == "grad_clip") t.grad_clip = to_double(name, v);
  else if (key == "adam_beta1") t.adam_beta1 = to_double(name, v);
  else if (key == "adam_beta2") t.adam_beta2 = to_double(name, v);
  else if (key == "adam_eps") t.adam_eps = to_double(name, v);
  else if (key == "dev_eval_interval") t.dev_eval_interval = to_int(name, v);
  else if (key == "checkpoint_interval")
    t.checkpoint_interval = to_int(name, v);
  else if (key == "feature_mode") t.feature_mode = v;
  else throw ConfigError("run config: unknown key " + name);
}

void set_audio_key(AudioConfig& a, const std::string& key,
                   const std::string& v) {
  const std::string name = "audio." + key;
  if (key == "sample_rate") a.sample_rate = to_int(name, v);
  else if (key == "win_length") a.win_length = to_int(name, v);
  else if (key == "hop_length") a.hop_length = to_int(name, v);
  else if (key == "fft_size") a.fft_size = to_int(name, v);
  else if (key == "n_mels") a.n_mels = to_int(name, v);
  else if (key == "fmin") a.fmin = to_double(name, v);
  else if (key == "fmax") a.fmax = to_double(name, v);
  else if (key == "log_floor") a.log_floor = to_double(name, v);
  else if (key == "griffin_lim_iters") a.griffin_lim_iters = to_int(name, v);
  else throw ConfigError("run config: unknown key " + name);
}

}  // namespace

void set_run_config_key(RunConfig& cfg, const std::string& section,
                        const std::string& key, const std::string& value) {
  require_config(!key.empty(), "run config: empty key in section " + section);
  if (section == "model") set_model_key(cfg.model, key, value);
  else if (section == "losses") set_losses_key(cfg.losses, key, value);
  else if (section == "trainer") set_trainer_key(cfg.trainer, key, value);
  else if (section == "audio") set_audio_key(cfg.audio, key, value);
  else throw ConfigError("run config: unknown section " + section);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  require_config(eq != std::string::npos,
                 "override must look like section.key=value: " + assignment);
  const std::string path = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const std::size_t dot = path.find('.');
  require_config(dot != std::string::npos && dot > 0 && dot + 1 < path.size(),
                 "override key must be section.key: " + path);
  set_run_config_key(cfg, path.substr(0, dot), path.substr(dot + 1), value);
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good())
    throw ConfigError("run config: cannot open " + path);

  RunConfig cfg;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string at = path + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      require_config(t.back() == ']' && t.size() > 2,
                     "run config: malformed section header at " + at);
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    require_config(eq != std::string::npos,
                   "run config: expected key = value at " + at);
    require_config(!section.empty(),
                   "run config: key before any [section] at " + at);
    set_run_config_key(cfg, section, trim(t.substr(0, eq)),
                       trim(t.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace sas

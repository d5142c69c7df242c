// src/checkpoint.cc

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

#include "sas/checkpoint.h"

#include <fstream>
#include <vector>

#include "json.hpp"
#include "sas/io_binary.h"

namespace sas {

namespace {

constexpr const char* kMagic = "SASCKPT1";
constexpr std::uint32_t kVersion = 1;

using ordered_json = nlohmann::ordered_json;

void quantize_f32(Mat& m) {
  for (int i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
  }
}

ordered_json parse_snapshot(const std::string& config_json) {
  try {
    return ordered_json::parse(config_json);
  } catch (const std::exception& e) {
    throw FormatError(std::string("checkpoint config snapshot: ") + e.what());
  }
}

template <typename T>
T field(const ordered_json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const std::exception& e) {
    throw FormatError(std::string("checkpoint config snapshot missing ") +
                      section + "." + key + ": " + e.what());
  }
}

ordered_json model_config_json(const ModelConfig& c) {
  ordered_json j;
  j["n_regions"] = c.n_regions;
  j["feature_dim"] = c.feature_dim;
  j["n_classes"] = c.n_classes;
  j["fuse_units"] = c.fuse_units;
  j["proj1_units"] = c.proj1_units;
  j["proj2_units"] = c.proj2_units;
  j["n_mels"] = c.n_mels;
  j["prenet_units"] = c.prenet_units;
  j["attn_dim"] = c.attn_dim;
  j["location_filters"] = c.location_filters;
  j["location_kernel"] = c.location_kernel;
  j["rnn_units"] = c.rnn_units;
  j["postnet_filters"] = c.postnet_filters;
  j["postnet_kernel"] = c.postnet_kernel;
  j["postnet_layers"] = c.postnet_layers;
  j["prenet_dropout"] = c.prenet_dropout;
  j["stop_threshold"] = c.stop_threshold;
  j["max_frames"] = c.max_frames;
  j["embedder_conv_filters"] = c.embedder_conv_filters;
  j["embedder_conv_kernel"] = c.embedder_conv_kernel;
  j["embedder_conv_stride"] = c.embedder_conv_stride;
  j["embedder_gru_hidden"] = c.embedder_gru_hidden;
  j["log_floor"] = c.log_floor;
  return j;
}

}  // namespace

std::string make_config_snapshot(const ModelConfig& model_cfg,
                                 const LossWeights& weights,
                                 const TrainConfig& train_cfg,
                                 const AudioConfig& audio_cfg) {
  ordered_json j;
  j["model"] = model_config_json(model_cfg);
  ordered_json jl;
  jl["lambda_ec"] = weights.lambda_ec;
  jl["stop_positive_weight"] = weights.stop_positive_weight;
  jl["mms_margin"] = weights.mms_margin;
  j["losses"] = jl;
  ordered_json jt;
  jt["seed"] = train_cfg.seed;
  jt["batch_size"] = train_cfg.batch_size;
  jt["max_iters"] = train_cfg.max_iters;
  jt["peak_lr"] = train_cfg.peak_lr;
  jt["warmup_iters"] = train_cfg.warmup_iters;
  jt["decay_gamma"] = train_cfg.decay_gamma;
  jt["ss_k"] = train_cfg.ss_k;
  jt["eps_min"] = train_cfg.eps_min;
  jt["grad_clip"] = train_cfg.grad_clip;
  jt["adam_beta1"] = train_cfg.adam_beta1;
  jt["adam_beta2"] = train_cfg.adam_beta2;
  jt["adam_eps"] = train_cfg.adam_eps;
  jt["dev_eval_interval"] = train_cfg.dev_eval_interval;
  jt["checkpoint_interval"] = train_cfg.checkpoint_interval;
  jt["feature_mode"] = train_cfg.feature_mode;
  j["train"] = jt;
  ordered_json ja;
  ja["sample_rate"] = audio_cfg.sample_rate;
  ja["win_length"] = audio_cfg.win_length;
  ja["hop_length"] = audio_cfg.hop_length;
  ja["fft_size"] = audio_cfg.fft_size;
  ja["n_mels"] = audio_cfg.n_mels;
  ja["fmin"] = audio_cfg.fmin;
  ja["fmax"] = audio_cfg.fmax;
  ja["log_floor"] = audio_cfg.log_floor;
  ja["griffin_lim_iters"] = audio_cfg.griffin_lim_iters;
  j["audio"] = ja;
  return j.dump();
}

ModelConfig model_config_from_snapshot(const std::string& config_json) {
  const ordered_json j = parse_snapshot(config_json);
  ModelConfig c;
  c.n_regions = field<int>(j, "model", "n_regions");
  c.feature_dim = field<int>(j, "model", "feature_dim");
  c.n_classes = field<int>(j, "model", "n_classes");
  c.fuse_units = field<int>(j, "model", "fuse_units");
  c.proj1_units = field<int>(j, "model", "proj1_units");
  c.proj2_units = field<int>(j, "model", "proj2_units");
  c.n_mels = field<int>(j, "model", "n_mels");
  c.prenet_units = field<int>(j, "model", "prenet_units");
  c.attn_dim = field<int>(j, "model", "attn_dim");
  c.location_filters = field<int>(j, "model", "location_filters");
  c.location_kernel = field<int>(j, "model", "location_kernel");
  c.rnn_units = field<int>(j, "model", "rnn_units");
  c.postnet_filters = field<int>(j, "model", "postnet_filters");
  c.postnet_kernel = field<int>(j, "model", "postnet_kernel");
  c.postnet_layers = field<int>(j, "model", "postnet_layers");
  c.prenet_dropout = field<double>(j, "model", "prenet_dropout");
  c.stop_threshold = field<double>(j, "model", "stop_threshold");
  c.max_frames = field<int>(j, "model", "max_frames");
  c.embedder_conv_filters = field<int>(j, "model", "embedder_conv_filters");
  c.embedder_conv_kernel = field<int>(j, "model", "embedder_conv_kernel");
  c.embedder_conv_stride = field<int>(j, "model", "embedder_conv_stride");
  c.embedder_gru_hidden = field<int>(j, "model", "embedder_gru_hidden");
  c.log_floor = field<double>(j, "model", "log_floor");
  return c;
}

LossWeights loss_weights_from_snapshot(const std::string& config_json) {
  const ordered_json j = parse_snapshot(config_json);
  LossWeights w;
  w.lambda_ec = field<double>(j, "losses", "lambda_ec");
  w.stop_positive_weight = field<double>(j, "losses", "stop_positive_weight");
  w.mms_margin = field<double>(j, "losses", "mms_margin");
  return w;
}

TrainConfig train_config_from_snapshot(const std::string& config_json) {
  const ordered_json j = parse_snapshot(config_json);
  TrainConfig t;
  t.seed = field<std::uint64_t>(j, "train", "seed");
  t.batch_size = field<int>(j, "train", "batch_size");
  t.max_iters = field<int>(j, "train", "max_iters");
  t.peak_lr = field<double>(j, "train", "peak_lr");
  t.warmup_iters = field<int>(j, "train", "warmup_iters");
  t.decay_gamma = field<double>(j, "train", "decay_gamma");
  t.ss_k = field<double>(j, "train", "ss_k");
  t.eps_min = field<double>(j, "train", "eps_min");
  t.grad_clip = field<double>(j, "train", "grad_clip");
  t.adam_beta1 = field<double>(j, "train", "adam_beta1");
  t.adam_beta2 = field<double>(j, "train", "adam_beta2");
  t.adam_eps = field<double>(j, "train", "adam_eps");
  t.dev_eval_interval = field<int>(j, "train", "dev_eval_interval");
  t.checkpoint_interval = field<int>(j, "train", "checkpoint_interval");
  t.feature_mode = field<std::string>(j, "train", "feature_mode");
  return t;
}

AudioConfig audio_config_from_snapshot(const std::string& config_json) {
  const ordered_json j = parse_snapshot(config_json);
  AudioConfig a;
  a.sample_rate = field<int>(j, "audio", "sample_rate");
  a.win_length = field<int>(j, "audio", "win_length");
  a.hop_length = field<int>(j, "audio", "hop_length");
  a.fft_size = field<int>(j, "audio", "fft_size");
  a.n_mels = field<int>(j, "audio", "n_mels");
  a.fmin = field<double>(j, "audio", "fmin");
  a.fmax = field<double>(j, "audio", "fmax");
  a.log_floor = field<double>(j, "audio", "log_floor");
  a.griffin_lim_iters = field<int>(j, "audio", "griffin_lim_iters");
  return a;
}

void save_checkpoint(const std::string& path, Model& model, Adam* adam,
                     std::uint64_t iteration, const std::string& config_json) {
  const std::vector<nn::Param*> params = model.params();
  for (nn::Param* p : params) quantize_f32(p->value);
  std::uint64_t adam_step = 0;
  std::vector<std::pair<std::string, const Mat*>> blobs;
  blobs.reserve(params.size() * 3);
  for (const nn::Param* p : params) {
    blobs.emplace_back("param/" + p->name, &p->value);
  }
  if (adam != nullptr) {
    require(adam->params().size() == params.size(),
            "save_checkpoint: optimizer is not bound to this model");
    for (Mat& m : adam->m()) quantize_f32(m);
    for (Mat& v : adam->v()) quantize_f32(v);
    for (std::size_t i = 0; i < params.size(); ++i) {
      blobs.emplace_back("adam_m/" + params[i]->name, &adam->m()[i]);
      blobs.emplace_back("adam_v/" + params[i]->name, &adam->v()[i]);
    }
    adam_step = adam->step_count();
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  write_bytes(out, kMagic, 8);
  write_u32(out, kVersion);
  write_u64(out, iteration);
  write_u64(out, adam_step);
  write_u32(out, static_cast<std::uint32_t>(config_json.size()));
  write_bytes(out, config_json.data(), config_json.size());
  write_u32(out, static_cast<std::uint32_t>(blobs.size()));
  for (const auto& [name, mat] : blobs) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    write_bytes(out, name.data(), name.size());
    write_u32(out, static_cast<std::uint32_t>(mat->rows()));
    write_u32(out, static_cast<std::uint32_t>(mat->cols()));
    write_mat_f32(out, *mat);
  }
  out.flush();
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  expect_magic(in, kMagic, path);
  const std::uint32_t version = read_u32(in, "checkpoint version");
  require_format(version == kVersion,
                 path + ": unsupported checkpoint version " +
                     std::to_string(version));
  LoadedCheckpoint ckpt;
  ckpt.iteration = read_u64(in, "checkpoint iteration");
  ckpt.adam_step = read_u64(in, "checkpoint adam step");
  const std::uint32_t json_len = read_u32(in, "checkpoint config length");
  require_format(json_len <= (1u << 20), path + ": config snapshot too large");
  ckpt.config_json.resize(json_len);
  read_bytes(in, ckpt.config_json.data(), json_len, "checkpoint config");
  const std::uint32_t n_blobs = read_u32(in, "checkpoint blob count");
  require_format(n_blobs <= 100000, path + ": implausible blob count");
  for (std::uint32_t i = 0; i < n_blobs; ++i) {
    const std::uint32_t name_len = read_u32(in, "blob name length");
    require_format(name_len > 0 && name_len <= 4096,
                   path + ": implausible blob name length");
    std::string name(name_len, '\0');
    read_bytes(in, name.data(), name_len, "blob name");
    const std::uint32_t rows = read_u32(in, "blob rows");
    const std::uint32_t cols = read_u32(in, "blob cols");
    require_format(rows <= (1u << 24) && cols <= (1u << 24),
                   path + ": implausible blob shape for " + name);
    Mat m = read_mat_f32(in, static_cast<int>(rows), static_cast<int>(cols),
                         "blob " + name);
    const bool inserted = ckpt.blobs.emplace(name, std::move(m)).second;
    require_format(inserted, path + ": duplicate blob " + name);
  }
  expect_eof(in, path);
  return ckpt;
}

void restore_model(const LoadedCheckpoint& ckpt, Model& model) {
  const ordered_json snap = parse_snapshot(ckpt.config_json);
  const ordered_json live = model_config_json(model.cfg);
  require_config(snap.contains("model") && snap["model"] == live,
                 "checkpoint model configuration does not match the live "
                 "model; re-run with the checkpoint's configuration");
  for (nn::Param* p : model.params()) {
    const auto it = ckpt.blobs.find("param/" + p->name);
    require_format(it != ckpt.blobs.end(),
                   "checkpoint is missing parameter " + p->name);
    require_format(it->second.rows() == p->value.rows() &&
                       it->second.cols() == p->value.cols(),
                   "checkpoint parameter " + p->name + " has wrong shape");
    p->value = it->second;
  }
}

void restore_adam(const LoadedCheckpoint& ckpt, Adam& adam) {
  const std::vector<nn::Param*>& params = adam.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (const char* kind : {"adam_m", "adam_v"}) {
      const std::string key = std::string(kind) + "/" + params[i]->name;
      const auto it = ckpt.blobs.find(key);
      require_format(it != ckpt.blobs.end(),
                     "checkpoint is missing optimizer state " + key);
      Mat& slot = (kind[5] == 'm') ? adam.m()[i] : adam.v()[i];
      require_format(it->second.rows() == slot.rows() &&
                         it->second.cols() == slot.cols(),
                     "checkpoint optimizer state " + key + " has wrong shape");
      slot = it->second;
    }
  }
  adam.set_step_count(ckpt.adam_step);
}

}  // namespace sas

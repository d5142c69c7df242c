// src/trainer.cc

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

#include "sas/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sas/rng.h"

namespace sas {

namespace {

std::string checkpoint_path(const std::string& out_dir, int iter) {
  char name[64];
  std::snprintf(name, sizeof(name), "checkpoint_%06d.sasckpt", iter);
  return (std::filesystem::path(out_dir) / name).string();
}

std::uint64_t epoch_seed(std::uint64_t seed, int epoch) {
  return Rng(seed).fork("epoch", static_cast<std::uint64_t>(epoch)).next_u64();
}

}  // namespace

void TrainConfig::validate() const {
  require_config(batch_size >= 1, "train config: batch_size must be >= 1");
  require_config(max_iters >= 0, "train config: max_iters must be >= 0");
  require_config(peak_lr > 0.0, "train config: peak_lr must be positive");
  require_config(warmup_iters >= 0, "train config: warmup_iters must be >= 0");
  require_config(decay_gamma > 0.0 && decay_gamma <= 1.0,
                 "train config: decay_gamma must be in (0, 1]");
  require_config(ss_k > 0.0, "train config: ss_k must be positive");
  require_config(eps_min > 0.0 && eps_min <= 100.0,
                 "train config: eps_min must be in (0, 100]");
  require_config(grad_clip > 0.0, "train config: grad_clip must be positive");
  require_config(adam_beta1 >= 0.0 && adam_beta1 < 1.0,
                 "train config: adam_beta1 must be in [0, 1)");
  require_config(adam_beta2 >= 0.0 && adam_beta2 < 1.0,
                 "train config: adam_beta2 must be in [0, 1)");
  require_config(adam_eps > 0.0, "train config: adam_eps must be positive");
  require_config(dev_eval_interval >= 0,
                 "train config: dev_eval_interval must be >= 0");
  require_config(checkpoint_interval >= 0,
                 "train config: checkpoint_interval must be >= 0");
  feature_mode_from_name(feature_mode);
}

Trainer::Trainer(Model& model, const TrainConfig& train_cfg,
                 const LossWeights& weights, const AudioConfig& audio_cfg)
    : model_(model),
      cfg_(train_cfg),
      weights_(weights),
      audio_(audio_cfg),
      adam_(model.params(), train_cfg.adam_beta1, train_cfg.adam_beta2,
            train_cfg.adam_eps, train_cfg.grad_clip) {
  cfg_.validate();
  require_config(audio_.n_mels == model_.cfg.n_mels,
                 "trainer: audio n_mels must match the model");
}

std::string Trainer::config_snapshot() const {
  return make_config_snapshot(model_.cfg, weights_, cfg_, audio_);
}

StepStats Trainer::train_step(const TrainingBatch& batch, int iter) {
  require(iter >= 1, "train_step: iterations are numbered from 1");
  const int B = batch.size();
  require(B >= 1, "train_step: empty batch");
  const int n_mels = model_.cfg.n_mels;
  const int emb_dim = model_.cfg.proj2_units;
  const bool use_ec = weights_.lambda_ec != 0.0;

  const double lr = cfg_.learning_rate(iter);
  const double tf_ratio = cfg_.teacher_forcing_ratio(iter);
  const double feed_prob = tf_ratio / 100.0;
  const Rng iter_rng =
      Rng(cfg_.seed).fork("iter", static_cast<std::uint64_t>(iter));

  for (nn::Param* p : model_.params()) p->zero_grad();

  // Per-item forward passes; each item owns one tape truncated to its length.
  std::vector<std::unique_ptr<nn::Tape>> tapes;
  std::vector<int> sse_pre_nodes(B), sse_post_nodes(B), stop_nodes(B);
  std::vector<int> img_nodes(B, -1), spk_nodes(B, -1);
  tapes.reserve(static_cast<std::size_t>(B));
  double sse_sum = 0.0, cells_sum = 0.0, stop_num = 0.0, stop_den = 0.0;
  Mat img_embs(B, emb_dim), spk_embs(B, emb_dim);
  for (int i = 0; i < B; ++i) {
    const int len = batch.lengths[static_cast<std::size_t>(i)];
    const Mat target =
        batch.target_mel[static_cast<std::size_t>(i)].topRows(len);
    const Mat stop_t =
        batch.stop_targets.row(i).head(len).transpose().eval();
    const Mat ones = Mat::Ones(len, 1);

    Rng item_rng = iter_rng.fork("item", static_cast<std::uint64_t>(i));
    std::vector<bool> feed(static_cast<std::size_t>(len));
    for (int s = 0; s < len; ++s)
      feed[static_cast<std::size_t>(s)] = item_rng.bernoulli(feed_prob);

    tapes.push_back(std::make_unique<nn::Tape>());
    nn::Tape& t = *tapes.back();
    Encoder::Output enc =
        model_.encoder.encode(t, batch.features[static_cast<std::size_t>(i)]);
    Decoder::UnrollResult un = model_.decoder.unroll_teacher_forced(
        t, enc.memory, target, feed, /*train=*/true, item_rng);

    sse_pre_nodes[static_cast<std::size_t>(i)] =
        masked_sse_node(t, un.mel_pre, target, ones);
    sse_post_nodes[static_cast<std::size_t>(i)] =
        masked_sse_node(t, un.mel_post, target, ones);
    stop_nodes[static_cast<std::size_t>(i)] = stop_bce_sum_node(
        t, un.stop_logits, stop_t, ones, weights_.stop_positive_weight);
    sse_sum += t.value(sse_pre_nodes[static_cast<std::size_t>(i)])(0, 0) +
               t.value(sse_post_nodes[static_cast<std::size_t>(i)])(0, 0);
    cells_sum += static_cast<double>(len) * n_mels;
    stop_num += t.value(stop_nodes[static_cast<std::size_t>(i)])(0, 0);
    stop_den += stop_weight_sum(stop_t, ones, weights_.stop_positive_weight);

    if (use_ec) {
      img_nodes[static_cast<std::size_t>(i)] = enc.image_global;
      spk_nodes[static_cast<std::size_t>(i)] = model_.embedder.embed(t, target);
      img_embs.row(i) = t.value(img_nodes[static_cast<std::size_t>(i)]);
      spk_embs.row(i) = t.value(spk_nodes[static_cast<std::size_t>(i)]);
    }
  }

  StepStats stats;
  stats.iter = iter;
  stats.lr = lr;
  stats.tf_ratio = tf_ratio;
  stats.losses.spectrogram = sse_sum / cells_sum;
  stats.losses.stop = stop_num / stop_den;

  // Batch-level cross-modal term on temporary leaves; its gradients seed the
  // per-item graphs below.
  nn::Param img_leaf, spk_leaf;
  if (use_ec) {
    img_leaf.name = "batch/image_embs";
    img_leaf.value = img_embs;
    img_leaf.zero_grad();
    spk_leaf.name = "batch/speech_embs";
    spk_leaf.value = spk_embs;
    spk_leaf.zero_grad();
    nn::Tape bt;
    const int mms = mms_loss_node(bt, bt.param(img_leaf), bt.param(spk_leaf),
                                  weights_.mms_margin, batch.match_mask());
    stats.losses.embedding = bt.value(mms)(0, 0);
    bt.backward(mms);
  }
  stats.losses.total = stats.losses.spectrogram + stats.losses.stop +
                       weights_.lambda_ec * stats.losses.embedding;

  const std::string at = " at iteration " + std::to_string(iter);
  if (!std::isfinite(stats.losses.spectrogram))
    throw NumericalError("non-finite spectrogram loss" + at);
  if (!std::isfinite(stats.losses.stop))
    throw NumericalError("non-finite stop loss" + at);
  if (!std::isfinite(stats.losses.embedding))
    throw NumericalError("non-finite embedding loss" + at);

  for (int i = 0; i < B; ++i) {
    std::vector<std::pair<int, Mat>> seeds;
    seeds.emplace_back(sse_pre_nodes[static_cast<std::size_t>(i)],
                       Mat::Constant(1, 1, 1.0 / cells_sum));
    seeds.emplace_back(sse_post_nodes[static_cast<std::size_t>(i)],
                       Mat::Constant(1, 1, 1.0 / cells_sum));
    seeds.emplace_back(stop_nodes[static_cast<std::size_t>(i)],
                       Mat::Constant(1, 1, 1.0 / stop_den));
    if (use_ec) {
      seeds.emplace_back(img_nodes[static_cast<std::size_t>(i)],
                         Mat(weights_.lambda_ec * img_leaf.grad.row(i)));
      seeds.emplace_back(spk_nodes[static_cast<std::size_t>(i)],
                         Mat(weights_.lambda_ec * spk_leaf.grad.row(i)));
    }
    tapes[static_cast<std::size_t>(i)]->backward_seeded(seeds);
    tapes[static_cast<std::size_t>(i)].reset();
  }

  for (nn::Param* p : model_.params()) {
    if (!all_finite(p->grad))
      throw NumericalError("non-finite gradient for " + p->name + at);
  }
  stats.grad_norm = adam_.step(lr);
  return stats;
}

LossBreakdown Trainer::eval_split(const CorpusManifest& manifest,
                                  const std::string& split) {
  const FeatureMode mode = feature_mode_from_name(cfg_.feature_mode);
  BatchIterator it(manifest, split, cfg_.batch_size, 0, audio_, mode);
  const int n_mels = model_.cfg.n_mels;
  const int emb_dim = model_.cfg.proj2_units;
  const bool use_ec = weights_.lambda_ec != 0.0;
  Rng dummy(0);

  double sse_sum = 0.0, cells_sum = 0.0, stop_num = 0.0, stop_den = 0.0;
  double ec_weighted = 0.0;
  int n_items = 0;
  while (auto b = it.next()) {
    const int B = b->size();
    Mat img_embs(B, emb_dim), spk_embs(B, emb_dim);
    for (int i = 0; i < B; ++i) {
      const int len = b->lengths[static_cast<std::size_t>(i)];
      const Mat target =
          b->target_mel[static_cast<std::size_t>(i)].topRows(len);
      const Mat stop_t = b->stop_targets.row(i).head(len).transpose().eval();
      const Mat ones = Mat::Ones(len, 1);

      nn::Tape t(/*grad_enabled=*/false);
      Encoder::Output enc =
          model_.encoder.encode(t, b->features[static_cast<std::size_t>(i)]);
      const std::vector<bool> feed(static_cast<std::size_t>(len), true);
      Decoder::UnrollResult un = model_.decoder.unroll_teacher_forced(
          t, enc.memory, target, feed, /*train=*/false, dummy);

      const double cells = static_cast<double>(len) * n_mels;
      sse_sum += spectrogram_loss(t.value(un.mel_pre), t.value(un.mel_post),
                                  target, ones) *
                 cells;
      cells_sum += cells;
      const double w =
          stop_weight_sum(stop_t, ones, weights_.stop_positive_weight);
      stop_num += stop_token_loss(t.value(un.stop_logits), stop_t, ones,
                                  weights_.stop_positive_weight) *
                  w;
      stop_den += w;
      if (use_ec) {
        img_embs.row(i) = t.value(enc.image_global);
        spk_embs.row(i) = t.value(model_.embedder.embed(t, target));
      }
    }
    if (use_ec) {
      ec_weighted += B * mms_loss(img_embs, spk_embs, weights_.mms_margin,
                                  b->match_mask());
      n_items += B;
    }
  }
  require(cells_sum > 0.0, "eval_split: split " + split + " is empty");

  LossBreakdown out;
  out.spectrogram = sse_sum / cells_sum;
  out.stop = stop_num / stop_den;
  out.embedding = use_ec ? ec_weighted / n_items : 0.0;
  out.total = out.spectrogram + out.stop + weights_.lambda_ec * out.embedding;
  return out;
}

void Trainer::fit(const CorpusManifest& manifest, const std::string& out_dir,
                  const LoadedCheckpoint* resume) {
  cfg_.validate();
  std::filesystem::create_directories(out_dir);
  const FeatureMode mode = feature_mode_from_name(cfg_.feature_mode);
  const std::string snapshot = config_snapshot();
  manifest.split("dev");  // required alongside train

  int start_iter = 0;
  if (resume != nullptr) {
    const TrainConfig ck = train_config_from_snapshot(resume->config_json);
    require_config(ck.feature_mode == cfg_.feature_mode,
                   "resume: checkpoint was trained with feature_mode " +
                       ck.feature_mode + ", run requests " + cfg_.feature_mode);
    restore_model(*resume, model_);
    restore_adam(*resume, adam_);
    start_iter = static_cast<int>(resume->iteration);
  }

  BatchIterator it(manifest, "train", cfg_.batch_size, 0, audio_, mode);
  const int nb = it.n_batches();
  require(nb > 0, "trainer: train split is empty");

  const std::string log_path =
      (std::filesystem::path(out_dir) / "train_log.jsonl").string();
  std::ofstream log(log_path, resume != nullptr
                                  ? (std::ios::out | std::ios::app)
                                  : (std::ios::out | std::ios::trunc));
  if (!log) throw IoError("cannot open training log: " + log_path);

  auto log_dev = [&](int iter) {
    const LossBreakdown dev = eval_split(manifest, "dev");
    nlohmann::ordered_json j;
    j["iter"] = iter;
    j["dev_L_s"] = dev.spectrogram;
    j["dev_L_st"] = dev.stop;
    j["dev_L_ec"] = dev.embedding;
    j["dev_total"] = dev.total;
    log << j.dump() << '\n';
    log.flush();
  };

  if (resume == nullptr) {
    save_checkpoint(checkpoint_path(out_dir, 0), model_, &adam_, 0, snapshot);
    if (cfg_.dev_eval_interval > 0) log_dev(0);
  }

  int cur_epoch = -1;
  for (int iter = start_iter + 1; iter <= cfg_.max_iters; ++iter) {
    const int epoch = (iter - 1) / nb;
    const int pos = (iter - 1) % nb;
    if (epoch != cur_epoch) {
      it.reset(epoch_seed(cfg_.seed, epoch));
      cur_epoch = epoch;
      if (pos > 0) it.skip(pos);
    }
    auto batch = it.next();
    require(batch.has_value(), "trainer: batch stream ended early");
    const StepStats s = train_step(*batch, iter);

    nlohmann::ordered_json j;
    j["iter"] = s.iter;
    j["lr"] = s.lr;
    j["tf_ratio"] = s.tf_ratio;
    j["L_s"] = s.losses.spectrogram;
    j["L_st"] = s.losses.stop;
    j["L_ec"] = s.losses.embedding;
    j["total"] = s.losses.total;
    log << j.dump() << '\n';
    log.flush();

    if (cfg_.dev_eval_interval > 0 && iter % cfg_.dev_eval_interval == 0)
      log_dev(iter);
    if (cfg_.checkpoint_interval > 0 && iter % cfg_.checkpoint_interval == 0)
      save_checkpoint(checkpoint_path(out_dir, iter), model_, &adam_,
                      static_cast<std::uint64_t>(iter), snapshot);
  }

  if (cfg_.max_iters > 0) {
    const int done = std::max(start_iter, cfg_.max_iters);
    const std::string final_path =
        (std::filesystem::path(out_dir) / "checkpoint_final.sasckpt").string();
    save_checkpoint(final_path, model_, &adam_,
                    static_cast<std::uint64_t>(done), snapshot);
  }
  log.flush();
  if (!log) throw IoError("failed writing training log: " + log_path);
}

}  // namespace sas

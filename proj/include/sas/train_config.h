// include/sas/train_config.h

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

#ifndef SAS_TRAIN_CONFIG_H_
#define SAS_TRAIN_CONFIG_H_

#include <cstdint>
#include <string>

#include "sas/common.h"
#include "sas/schedule.h"

namespace sas {

struct TrainConfig {
  std::uint64_t seed = 1;
  int batch_size = 16;
  int max_iters = 30000;
  double peak_lr = 2e-3;
  int warmup_iters = 4000;
  double decay_gamma = 0.99995;
  double ss_k = 2000.0;     // scheduled sampling decay constant
  double eps_min = 97.5;    // teacher forcing floor, percent
  double grad_clip = 1.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int dev_eval_interval = 500;
  int checkpoint_interval = 1000;
  std::string feature_mode = "bottom-up";

  void validate() const;
  double learning_rate(int iter) const {
    return warmup_decay_lr(iter, peak_lr, warmup_iters, decay_gamma);
  }
  double teacher_forcing_ratio(int iter) const {
    return scheduled_sampling_ratio(iter, ss_k, eps_min);
  }
};

}  // namespace sas

#endif  // SAS_TRAIN_CONFIG_H_

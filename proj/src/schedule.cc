// src/schedule.cc

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

#include "sas/schedule.h"

#include <algorithm>
#include <cmath>

#include "sas/common.h"

namespace sas {

double warmup_decay_lr(int iter, double peak, int warmup_iters, double gamma) {
  require_config(peak > 0.0, "schedule: peak learning rate must be positive");
  require_config(warmup_iters >= 0, "schedule: warmup_iters must be >= 0");
  require_config(gamma > 0.0 && gamma <= 1.0,
                 "schedule: decay gamma must be in (0, 1]");
  require(iter >= 0, "schedule: iteration must be >= 0");
  if (iter < warmup_iters)
    return peak * static_cast<double>(iter) / warmup_iters;
  return peak * std::pow(gamma, iter - warmup_iters);
}

double scheduled_sampling_ratio(int iter, double k, double eps_min) {
  require_config(k > 0.0, "schedule: sampling constant k must be positive");
  require_config(eps_min >= 0.0 && eps_min <= 100.0,
                 "schedule: eps_min must be a percentage in [0, 100]");
  require(iter >= 0, "schedule: iteration must be >= 0");
  const double decayed = 100.0 * k / (k + std::exp(iter / k));
  return std::max(eps_min, decayed);
}

}  // namespace sas

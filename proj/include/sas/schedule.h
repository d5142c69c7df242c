// include/sas/schedule.h

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

#ifndef SAS_SCHEDULE_H_
#define SAS_SCHEDULE_H_

namespace sas {

// Linear warmup from zero over warmup_iters, then exponential decay:
// lr(i) = peak * i / warmup          for i < warmup
// lr(i) = peak * gamma^(i - warmup)  otherwise
double warmup_decay_lr(int iter, double peak, int warmup_iters, double gamma);

// Teacher forcing percentage with an inverse-sigmoid decay and a floor:
// tf(i) = max(eps_min, 100 * k / (k + exp(i / k))).
double scheduled_sampling_ratio(int iter, double k, double eps_min);

}  // namespace sas

#endif  // SAS_SCHEDULE_H_

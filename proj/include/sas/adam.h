// include/sas/adam.h

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

#ifndef SAS_ADAM_H_
#define SAS_ADAM_H_

#include <cstdint>
#include <vector>

#include "sas/nn/tape.h"

namespace sas {

// Adam with bias correction, preceded by global-norm gradient clipping over
// all parameter groups together.
class Adam {
 public:
  Adam(std::vector<nn::Param*> params, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8, double clip_norm = 1.0);

  // Applies one update from the params' current grads. Returns the global
  // gradient norm before clipping.
  double step(double lr);

  std::uint64_t step_count() const { return step_count_; }
  const std::vector<nn::Param*>& params() const { return params_; }
  std::vector<Mat>& m() { return m_; }
  std::vector<Mat>& v() { return v_; }
  void set_step_count(std::uint64_t t) { step_count_ = t; }

 private:
  std::vector<nn::Param*> params_;
  double beta1_, beta2_, eps_, clip_norm_;
  std::uint64_t step_count_ = 0;
  std::vector<Mat> m_, v_;
};

}  // namespace sas

#endif  // SAS_ADAM_H_

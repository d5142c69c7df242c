// src/adam.cc

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

#include "sas/adam.h"

#include <cmath>

namespace sas {

Adam::Adam(std::vector<nn::Param*> params, double beta1, double beta2,
           double eps, double clip_norm)
    : params_(std::move(params)),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      clip_norm_(clip_norm) {
  require_config(beta1_ >= 0.0 && beta1_ < 1.0, "adam: beta1 must be in [0,1)");
  require_config(beta2_ >= 0.0 && beta2_ < 1.0, "adam: beta2 must be in [0,1)");
  require_config(eps_ > 0.0, "adam: eps must be positive");
  require_config(clip_norm_ > 0.0, "adam: clip_norm must be positive");
  require(!params_.empty(), "adam: no parameters");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto* p : params_) {
    m_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
  }
}

double Adam::step(double lr) {
  double sq_norm = 0.0;
  for (const auto* p : params_) {
    require(p->grad.rows() == p->value.rows() &&
                p->grad.cols() == p->value.cols(),
            "adam: missing gradient for " + p->name);
    sq_norm += p->grad.squaredNorm();
  }
  const double norm = std::sqrt(sq_norm);
  const double scale = norm > clip_norm_ ? clip_norm_ / norm : 1.0;

  ++step_count_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_count_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    nn::Param& p = *params_[k];
    const Mat g = p.grad * scale;
    m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * g;
    v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * g.cwiseProduct(g);
    const Mat m_hat = m_[k] / bc1;
    const Mat v_hat = v_[k] / bc2;
    p.value.array() -=
        lr * m_hat.array() / (v_hat.array().sqrt() + eps_);
  }
  return norm;
}

}  // namespace sas

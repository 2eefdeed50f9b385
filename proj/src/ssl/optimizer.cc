// ssl/optimizer.cc

// Copyright 2026  ctclab authors

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

#include "ssl/optimizer.h"

#include <cmath>

#include "base/error.h"

namespace ctclab::ssl {

void OptimizerConfig::Validate() const {
  if (lr < 0.0) throw ConfigError("learning rate must be >= 0");
  if (kind == kSgd && (momentum < 0.0 || momentum >= 1.0)) {
    throw ConfigError("sgd momentum must lie in [0, 1)");
  }
  if (kind == kAdam &&
      (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0 ||
       eps <= 0.0)) {
    throw ConfigError("bad adam hyperparameters");
  }
}

double ScheduledLr(double base_lr, LrSchedule schedule, int warmup_steps,
                   int64_t step) {
  if (schedule == LrSchedule::kConstant) return base_lr;
  if (warmup_steps < 1) throw ConfigError("warmup_steps must be >= 1");
  double s = static_cast<double>(step);
  double w = static_cast<double>(warmup_steps);
  return base_lr * std::min(s / w, std::sqrt(w / s));
}

Optimizer::Optimizer(const OptimizerConfig& cfg,
                     const nn::ParameterSet& shape)
    : cfg_(cfg), first_(shape.ZerosLike()), second_(shape.ZerosLike()) {
  cfg_.Validate();
}

void Optimizer::Step(nn::ParameterSet& params, const nn::ParameterSet& grad,
                     double lr) {
  nn::ParameterSet::CheckCompatible(params, grad);
  ++step_count_;
  if (cfg_.kind == OptimizerConfig::kSgd) {
    for (int i = 0; i < params.size(); ++i) {
      if (!params.entry(i).trainable) continue;
      Matrix& vel = first_.mutable_value(i);
      vel = cfg_.momentum * vel + grad.value(i);
      params.mutable_value(i) -= lr * vel;
    }
    return;
  }
  const double bc1 = 1.0 - std::pow(cfg_.beta1, step_count_);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, step_count_);
  for (int i = 0; i < params.size(); ++i) {
    if (!params.entry(i).trainable) continue;
    Matrix& m = first_.mutable_value(i);
    Matrix& v = second_.mutable_value(i);
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * grad.value(i);
    v = cfg_.beta2 * v.array().matrix() +
        (1.0 - cfg_.beta2) * grad.value(i).array().square().matrix();
    Matrix mhat = m / bc1;
    Matrix denom = (v / bc2).array().sqrt() + cfg_.eps;
    params.mutable_value(i).array() -=
        lr * mhat.array() / denom.array();
  }
}

void ClipGradNorm(nn::ParameterSet& grad, double max_norm) {
  if (max_norm <= 0.0) return;
  double norm = grad.TrainableNorm();
  if (norm > max_norm) grad.Scale(max_norm / norm);
}

}  // namespace ctclab::ssl

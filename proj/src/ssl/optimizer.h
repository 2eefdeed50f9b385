// ssl/optimizer.h

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

#ifndef CTCLAB_SSL_OPTIMIZER_H_
#define CTCLAB_SSL_OPTIMIZER_H_

#include "nn/parameter-set.h"

namespace ctclab::ssl {

struct OptimizerConfig {
  enum Kind { kSgd, kAdam };

  Kind kind = kAdam;
  double lr = 2e-3;
  double momentum = 0.9;  // sgd
  double beta1 = 0.9;     // adam
  double beta2 = 0.999;
  double eps = 1e-8;

  void Validate() const;

  bool operator==(const OptimizerConfig&) const = default;
};

enum class LrSchedule { kConstant, kWarmup };

// Linear warmup to the base rate, then inverse-sqrt decay; step is the
// 1-based global update counter.
double ScheduledLr(double base_lr, LrSchedule schedule, int warmup_steps,
                   int64_t step);

// Stateful first-order update over the trainable entries.  Non-trainable
// entries (running statistics) are never touched.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, const nn::ParameterSet& shape);

  void Step(nn::ParameterSet& params, const nn::ParameterSet& grad,
            double lr);

 private:
  OptimizerConfig cfg_;
  nn::ParameterSet first_;   // momentum / first moment
  nn::ParameterSet second_;  // adam second moment
  int64_t step_count_ = 0;
};

// Scales grad in place so its trainable L2 norm is at most max_norm.
void ClipGradNorm(nn::ParameterSet& grad, double max_norm);

}  // namespace ctclab::ssl

#endif  // CTCLAB_SSL_OPTIMIZER_H_

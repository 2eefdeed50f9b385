// nn/ema.h

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

#ifndef CTCLAB_NN_EMA_H_
#define CTCLAB_NN_EMA_H_

#include "nn/parameter-set.h"

namespace ctclab::nn {

// offline <- alpha * offline + (1 - alpha) * online, element-wise over
// every entry, running statistics included.  alpha in [0, 1].
ParameterSet EmaUpdate(const ParameterSet& offline, const ParameterSet& online,
                       double alpha);

// In-place variant used by the inner training loop.
void EmaUpdateInPlace(ParameterSet& offline, const ParameterSet& online,
                      double alpha);

// Derives the per-step momentum coefficient from the seed-retention
// weight w = alpha^K, where K is the number of online updates per epoch:
// alpha = w^(1/K).
double MomentumFromWeight(double w, int steps_per_epoch);

}  // namespace ctclab::nn

#endif  // CTCLAB_NN_EMA_H_

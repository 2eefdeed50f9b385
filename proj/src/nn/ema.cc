// nn/ema.cc

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

#include "nn/ema.h"

#include <cmath>

#include "base/error.h"

namespace ctclab::nn {

void EmaUpdateInPlace(ParameterSet& offline, const ParameterSet& online,
                      double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw InputDomainError("ema momentum must lie in [0, 1]");
  }
  ParameterSet::CheckCompatible(offline, online);
  if (alpha == 1.0) return;  // fixed point; keep offline bit-identical
  for (int i = 0; i < offline.size(); ++i) {
    Matrix& v = offline.mutable_value(i);
    v = alpha * v + (1.0 - alpha) * online.value(i);
  }
}

ParameterSet EmaUpdate(const ParameterSet& offline, const ParameterSet& online,
                       double alpha) {
  ParameterSet out = offline;
  EmaUpdateInPlace(out, online, alpha);
  return out;
}

double MomentumFromWeight(double w, int steps_per_epoch) {
  if (steps_per_epoch < 1) {
    throw InputDomainError("steps_per_epoch must be >= 1");
  }
  if (!(w > 0.0) || w > 1.0) {
    throw InputDomainError("seed-retention weight w must lie in (0, 1]");
  }
  return std::pow(w, 1.0 / static_cast<double>(steps_per_epoch));
}

}  // namespace ctclab::nn

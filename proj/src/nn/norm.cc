// nn/norm.cc

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

#include "nn/norm.h"

#include <cmath>

#include "base/error.h"

namespace ctclab::nn {

Matrix GroupNorm(const Matrix& x, int num_groups, const Vector& gain,
                 const Vector& bias, double epsilon) {
  const int channels = static_cast<int>(x.rows());
  const int time = static_cast<int>(x.cols());
  if (num_groups < 1 || channels % num_groups != 0) {
    throw ConfigError("num_groups must divide the channel count");
  }
  if (gain.size() != channels || bias.size() != channels) {
    throw ConfigError("gain/bias must have one entry per channel");
  }
  Matrix y(channels, time);
  if (time == 0) return y;
  const int group_size = channels / num_groups;
  for (int g = 0; g < num_groups; ++g) {
    const int c0 = g * group_size;
    auto block = x.middleRows(c0, group_size);
    const double n = static_cast<double>(group_size) * time;
    const double mean = block.sum() / n;
    const double var = (block.array() - mean).square().sum() / n;
    const double inv = 1.0 / std::sqrt(var + epsilon);
    for (int c = c0; c < c0 + group_size; ++c) {
      for (int t = 0; t < time; ++t) {
        y(c, t) = (x(c, t) - mean) * inv * gain(c) + bias(c);
      }
    }
  }
  return y;
}

}  // namespace ctclab::nn

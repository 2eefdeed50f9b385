// augment/spec-augment.cc

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

#include "augment/spec-augment.h"

#include <algorithm>

#include "base/error.h"

namespace ctclab::aug {

void AugmentPolicy::Validate() const {
  if (num_time_masks < 0 || num_freq_masks < 0 || max_time_mask_width < 0 ||
      max_freq_mask_width < 0) {
    throw ConfigError("augment mask counts and widths must be >= 0");
  }
}

FeatureSequence Apply(const AugmentPolicy& policy,
                      const FeatureSequence& features, Rng& rng) {
  policy.Validate();
  if (!policy.enabled) return features;
  FeatureSequence out = features;
  const int frames = features.length();
  const int dim = features.dim();

  for (int m = 0; m < policy.num_time_masks; ++m) {
    if (frames == 0 || policy.max_time_mask_width == 0) break;
    int width = std::uniform_int_distribution<int>(
        0, std::min(policy.max_time_mask_width, frames))(rng);
    int start = std::uniform_int_distribution<int>(0, frames - width)(rng);
    out.frames.middleRows(start, width).setConstant(policy.mask_value);
  }
  for (int m = 0; m < policy.num_freq_masks; ++m) {
    if (dim == 0 || frames == 0 || policy.max_freq_mask_width == 0) break;
    int width = std::uniform_int_distribution<int>(
        0, std::min(policy.max_freq_mask_width, dim))(rng);
    int start = std::uniform_int_distribution<int>(0, dim - width)(rng);
    out.frames.middleCols(start, width).setConstant(policy.mask_value);
  }
  return out;
}

}  // namespace ctclab::aug

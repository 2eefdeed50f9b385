// augment/spec-augment.h

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

#ifndef CTCLAB_AUGMENT_SPEC_AUGMENT_H_
#define CTCLAB_AUGMENT_SPEC_AUGMENT_H_

#include "base/rng.h"
#include "base/sequence.h"

namespace ctclab::aug {

// Stochastic time/frequency masking applied to training inputs.  Masks
// are clamped to the sequence bounds; no time warping.
struct AugmentPolicy {
  int num_time_masks = 2;
  int max_time_mask_width = 10;  // frames
  int num_freq_masks = 2;
  int max_freq_mask_width = 4;  // feature bins
  double mask_value = 0.0;
  bool enabled = true;

  void Validate() const;
};

// Draws each mask's width and start from rng, in a fixed order (time
// masks first), and overwrites the masked cells with mask_value.  A
// disabled policy or zero widths return the input bit-identically.
FeatureSequence Apply(const AugmentPolicy& policy,
                      const FeatureSequence& features, Rng& rng);

}  // namespace ctclab::aug

#endif  // CTCLAB_AUGMENT_SPEC_AUGMENT_H_

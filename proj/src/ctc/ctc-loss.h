// ctc/ctc-loss.h

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

#ifndef CTCLAB_CTC_CTC_LOSS_H_
#define CTCLAB_CTC_CTC_LOSS_H_

#include <optional>

#include "base/sequence.h"
#include "ctc/posteriors.h"
#include "ctc/vocabulary.h"

namespace ctclab {

// Frame-level latent sequence over tokens + blank; scores against
// posteriors of the same length.
struct Alignment {
  std::vector<int> frames;
};

// The CTC collapse function: drop consecutive duplicates, then drop all
// blanks.  Throws InputDomainError on ids outside tokens + blank.
LabelSequence Collapse(const Alignment& alignment, const Vocabulary& vocab);

// log P(target | post), marginalized over all alignments that collapse to
// the target.  Forward recursion over the blank-extended target, entirely
// in log space.  Returns -inf when the target is unreachable in the given
// number of frames (T < |Y| + #adjacent-repeats).
double CtcLogLikelihood(const FramePosteriors& post,
                        const LabelSequence& target);

struct CtcGradients {
  double loss = 0.0;    // -log-likelihood
  Matrix grad_logits;   // d loss / d pre-softmax logits; rows sum to 0
  Matrix grad_logp;     // d loss / d log-probabilities (= -occupancy)
};

// Forward-backward pass producing the loss and its exact gradient.
// Returns nullopt when the target is unreachable; callers treat that as a
// skip signal rather than an error so degenerate pseudo-labels cannot
// abort training.
std::optional<CtcGradients> CtcLossAndGrad(const FramePosteriors& post,
                                           const LabelSequence& target);

// Per-frame argmax over tokens + blank (ties to the lowest id), then
// Collapse.  T=0 yields the empty sequence.
LabelSequence BestPathDecode(const FramePosteriors& post,
                             const Vocabulary& vocab);

}  // namespace ctclab

#endif  // CTCLAB_CTC_CTC_LOSS_H_

// ctc/prefix-beam-search.h

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

#ifndef CTCLAB_CTC_PREFIX_BEAM_SEARCH_H_
#define CTCLAB_CTC_PREFIX_BEAM_SEARCH_H_

#include <utility>
#include <vector>

#include "base/sequence.h"
#include "ctc/posteriors.h"
#include "ctc/vocabulary.h"

namespace ctclab {

struct BeamConfig {
  int beam_size = 20;
  double prune_threshold = 14.0;  // score gap below the frame best
  double lm_weight = 1.0;
  double insertion_bonus = 2.0;   // per emitted token
  int nbest = 1;

  void Validate() const;
};

// Decoder-side view of a language model.  States are value types (the
// context window) so scoring stays const and reentrant.
struct LmState {
  std::vector<int> context;

  bool operator<(const LmState& o) const { return context < o.context; }
};

class PrefixScorer {
 public:
  virtual ~PrefixScorer() = default;

  virtual LmState InitialState() const = 0;
  // log P(token | state) and the successor state.
  virtual double ScoreExtension(const LmState& state, int token,
                                LmState* next_state) const = 0;
  // log P(end of sequence | state), charged once when a hypothesis is
  // finalized.
  virtual double ScoreEnd(const LmState& state) const = 0;
  virtual bool Compatible(const Vocabulary& vocab) const = 0;
};

struct BeamHypothesis {
  LabelSequence labels;
  double score = 0.0;  // log P_ctc + lm_weight * log P_lm + bonus * |Y|
};

// Frame-synchronous CTC prefix beam search.  Each surviving prefix keeps
// separate blank-ending and non-blank-ending mass; LM score and insertion
// bonus are added when a prefix grows by one token, and pruning applies to
// the fused score.  With lm == nullptr or lm_weight == 0 the LM term is
// dropped entirely, byte-for-byte.
std::vector<BeamHypothesis> PrefixBeamSearch(const FramePosteriors& post,
                                             const Vocabulary& vocab,
                                             const BeamConfig& cfg,
                                             const PrefixScorer* lm = nullptr);

}  // namespace ctclab

#endif  // CTCLAB_CTC_PREFIX_BEAM_SEARCH_H_

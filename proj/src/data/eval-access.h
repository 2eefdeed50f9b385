// data/eval-access.h

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

// Evaluation-only access to the hidden unlabeled ground truth.  Training
// code must not include this header; an audit test enforces that the
// trainer sources never reference it, so pseudo-label quality can only be
// measured, never trained on, outside topline/evaluation tools.

#ifndef CTCLAB_DATA_EVAL_ACCESS_H_
#define CTCLAB_DATA_EVAL_ACCESS_H_

#include <string>
#include <vector>

#include "data/dataset.h"

namespace ctclab::data {

class EvalAccess {
 public:
  // Deliberately loud; call sites document themselves as evaluation-side.
  static EvalAccess GrantForEvaluation() { return EvalAccess(); }

 private:
  EvalAccess() = default;
};

// In-memory accessor for freshly generated datasets.
const std::vector<LabelSequence>& UnlabeledTruthForEval(const SplitDataset& ds,
                                                        EvalAccess access);

// Disk accessor reading <dir>/unlabeled.ref.trn.txt.
std::vector<LabelSequence> LoadUnlabeledTruth(const std::string& dataset_dir,
                                              const Vocabulary& vocab,
                                              EvalAccess access);

}  // namespace ctclab::data

#endif  // CTCLAB_DATA_EVAL_ACCESS_H_

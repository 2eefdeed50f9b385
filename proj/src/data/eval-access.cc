// data/eval-access.cc

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

#include "data/eval-access.h"

#include "data/dataset-io.h"

namespace ctclab::data {

const std::vector<LabelSequence>& UnlabeledTruthForEval(const SplitDataset& ds,
                                                        EvalAccess) {
  return ds.unlabeled_truth_;
}

std::vector<LabelSequence> LoadUnlabeledTruth(const std::string& dataset_dir,
                                              const Vocabulary& vocab,
                                              EvalAccess) {
  return ReadTranscripts(dataset_dir + "/unlabeled.ref.trn.txt", vocab);
}

}  // namespace ctclab::data

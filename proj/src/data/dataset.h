// data/dataset.h

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

#ifndef CTCLAB_DATA_DATASET_H_
#define CTCLAB_DATA_DATASET_H_

#include <string>
#include <vector>

#include "base/sequence.h"
#include "ctc/vocabulary.h"
#include "data/domain-spec.h"

namespace ctclab::data {

class EvalAccess;
class SplitDataset;

SplitDataset GenerateFromManifest(const struct DatasetManifest& manifest);
void WriteDatasetDir(const SplitDataset& ds, const std::string& dir);
const std::vector<LabelSequence>& UnlabeledTruthForEval(const SplitDataset& ds,
                                                        EvalAccess access);

struct LabeledExample {
  FeatureSequence features;
  LabelSequence transcript;
};

// Complete recipe for one dataset; regenerating from it reproduces every
// file byte-for-byte.
struct DatasetManifest {
  std::string setting;  // in_domain_small | in_domain_large | out_domain
  uint64_t base_seed = 0;
  uint64_t labeled_seed = 0;
  uint64_t unlabeled_seed = 0;
  uint64_t dev_seed = 0;
  uint64_t test_seed = 0;
  uint64_t lmtext_seed = 0;
  int labeled_size = 0;
  int unlabeled_size = 0;
  int dev_size = 0;
  int test_size = 0;
  int lm_text_sentences = 0;
  DomainSpec base;    // labeled + LM text domain
  DomainSpec target;  // unlabeled/dev/test domain (== base when in-domain)

  bool operator==(const DatasetManifest&) const = default;
};

// Labeled set D_sup (base domain), unlabeled set D_unsup (target domain),
// dev/test sets (target domain), and a base-domain LM text corpus.
//
// The unlabeled samples' ground-truth transcripts live behind an
// evaluation capability: training code sees features only.
class SplitDataset {
 public:
  DatasetManifest manifest;
  std::vector<LabeledExample> labeled;
  std::vector<FeatureSequence> unlabeled;
  std::vector<LabeledExample> dev;
  std::vector<LabeledExample> test;
  std::vector<LabelSequence> lm_text;

  Vocabulary vocab() const { return Vocabulary(manifest.base.tokens); }

 private:
  std::vector<LabelSequence> unlabeled_truth_;  // evaluation-only

  friend SplitDataset GenerateFromManifest(const DatasetManifest& manifest);
  friend void WriteDatasetDir(const SplitDataset& ds, const std::string& dir);
  friend const std::vector<LabelSequence>& UnlabeledTruthForEval(
      const SplitDataset& ds, EvalAccess access);
};

}  // namespace ctclab::data

#endif  // CTCLAB_DATA_DATASET_H_

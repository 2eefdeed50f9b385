// data/dataset-io.h

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

#ifndef CTCLAB_DATA_DATASET_IO_H_
#define CTCLAB_DATA_DATASET_IO_H_

#include <string>
#include <vector>

#include "ctc/vocabulary.h"
#include "data/dataset.h"

namespace ctclab::data {

// On-disk dataset layout under one directory:
//   manifest.txt           full generation recipe
//   labeled/NNNN.feat      binary feature containers (one per sample)
//   labeled.trn.txt        transcripts, one per line, space-separated tokens
//   unlabeled/NNNN.feat
//   unlabeled.ref.trn.txt  hidden truth; read only through the eval accessor
//   dev/NNNN.feat, dev.trn.txt
//   test/NNNN.feat, test.trn.txt
//   lm_corpus.trn.txt      base-domain text for LM training
void WriteDatasetDir(const SplitDataset& ds, const std::string& dir);

// Loads everything except the hidden unlabeled truth.
SplitDataset LoadDatasetDir(const std::string& dir);

// Transcript file helpers shared with hypothesis/reference files.
void WriteTranscripts(const std::string& path,
                      const std::vector<LabelSequence>& sentences,
                      const Vocabulary& vocab);
std::vector<LabelSequence> ReadTranscripts(const std::string& path,
                                           const Vocabulary& vocab);

}  // namespace ctclab::data

#endif  // CTCLAB_DATA_DATASET_IO_H_

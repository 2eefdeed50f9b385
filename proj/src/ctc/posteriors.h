// ctc/posteriors.h

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

#ifndef CTCLAB_CTC_POSTERIORS_H_
#define CTCLAB_CTC_POSTERIORS_H_

#include <string>

#include "base/sequence.h"

namespace ctclab {

// Per-frame log-probabilities over tokens + blank: T rows, |V|+1 columns.
// Every row log-sum-exps to 0 (within 1e-6) and all entries are <= 0.
struct FramePosteriors {
  Matrix log_probs;

  int length() const { return static_cast<int>(log_probs.rows()); }
  int num_labels() const { return static_cast<int>(log_probs.cols()); }

  // Throws InputDomainError if the normalization invariant is broken.
  void Validate() const;
};

// On-disk form is the shared binary matrix container; see base/binary-io.h.
void WritePosteriorsFile(const std::string& path, const FramePosteriors& post);
FramePosteriors ReadPosteriorsFile(const std::string& path);

}  // namespace ctclab

#endif  // CTCLAB_CTC_POSTERIORS_H_

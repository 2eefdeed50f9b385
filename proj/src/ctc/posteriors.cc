// ctc/posteriors.cc

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

#include "ctc/posteriors.h"

#include <cmath>
#include <span>

#include "base/binary-io.h"
#include "base/error.h"
#include "base/math-util.h"

namespace ctclab {

void FramePosteriors::Validate() const {
  for (int t = 0; t < length(); ++t) {
    double lse = kLogZero;
    for (int k = 0; k < num_labels(); ++k) {
      double v = log_probs(t, k);
      if (v > 0.0) {
        throw InputDomainError("posterior entry > 0 at frame " +
                               std::to_string(t));
      }
      lse = LogAdd(lse, v);
    }
    if (std::abs(lse) > 1e-6) {
      throw InputDomainError("posterior row " + std::to_string(t) +
                             " is not log-normalized (lse=" +
                             std::to_string(lse) + ")");
    }
  }
}

void WritePosteriorsFile(const std::string& path,
                         const FramePosteriors& post) {
  WriteMatrixFile(path, post.log_probs);
}

FramePosteriors ReadPosteriorsFile(const std::string& path) {
  return FramePosteriors{ReadMatrixFile(path)};
}

}  // namespace ctclab

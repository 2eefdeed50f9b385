// base/sequence.h

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

#ifndef CTCLAB_BASE_SEQUENCE_H_
#define CTCLAB_BASE_SEQUENCE_H_

#include <vector>

#include <Eigen/Dense>

namespace ctclab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Token ids over a Vocabulary; blanks never appear here.
using LabelSequence = std::vector<int>;

// T x D acoustic-like features, one row per frame.
struct FeatureSequence {
  Matrix frames;

  int length() const { return static_cast<int>(frames.rows()); }
  int dim() const { return static_cast<int>(frames.cols()); }
};

}  // namespace ctclab

#endif  // CTCLAB_BASE_SEQUENCE_H_

// tests/oracles.h

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

// Test-only reference implementations, deliberately independent of the
// library code paths they check: exhaustive enumerations and naive loops
// instead of recursions and fused kernels.

#ifndef CTCLAB_TESTS_ORACLES_H_
#define CTCLAB_TESTS_ORACLES_H_

#include <map>
#include <vector>

#include "base/rng.h"
#include "base/sequence.h"
#include "ctc/posteriors.h"

namespace ctclab::testing {

// Enumerates all (|V|+1)^T alignments, collapses each by hand, and
// accumulates exp-space path probabilities per label sequence.  Only
// feasible for tiny T and |V|.
std::map<LabelSequence, double> BruteForceTargetDistribution(
    const FramePosteriors& post);

// Collapse written as an explicit two-pass loop (dedupe, strip blanks).
LabelSequence NaiveCollapse(const std::vector<int>& frames, int blank_id);

// Random valid posteriors: log-softmax of iid normal logits.
FramePosteriors RandomPosteriors(int num_frames, int num_labels, Rng& rng);

// Per-channel normalization over time, the instance-norm reference:
// x is channels x time.
Matrix InstanceNormReference(const Matrix& x, const Vector& gain,
                             const Vector& bias, double epsilon);

// Single mean/variance over all channels and time steps jointly.
Matrix LayerNormOverAllReference(const Matrix& x, const Vector& gain,
                                 const Vector& bias, double epsilon);

}  // namespace ctclab::testing

#endif  // CTCLAB_TESTS_ORACLES_H_

// nn/norm.h

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

#ifndef CTCLAB_NN_NORM_H_
#define CTCLAB_NN_NORM_H_

#include "base/sequence.h"

namespace ctclab::nn {

// Group normalization of a channels x time activation map for a single
// sample.  Channels are split into num_groups contiguous groups; each
// group is standardized over its channels and all time steps, then a
// per-channel affine (gain, bias) is applied.
//
// num_groups == channels reproduces instance normalization and
// num_groups == 1 reproduces layer normalization over (channels, time).
Matrix GroupNorm(const Matrix& x, int num_groups, const Vector& gain,
                 const Vector& bias, double epsilon);

}  // namespace ctclab::nn

#endif  // CTCLAB_NN_NORM_H_

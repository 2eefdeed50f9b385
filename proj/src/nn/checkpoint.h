// nn/checkpoint.h

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

#ifndef CTCLAB_NN_CHECKPOINT_H_
#define CTCLAB_NN_CHECKPOINT_H_

#include <string>

#include "nn/encoder.h"
#include "nn/parameter-set.h"

namespace ctclab::nn {

// Binary checkpoint container (little-endian):
//   u32 magic "CLK1", u32 format version,
//   encoder config: u32 num_blocks, d_model, num_heads, d_ff, conv_kernel,
//     norm kind tag (0 batch / 1 group / 2 instance / 3 layer),
//     num_groups, subsample_factor, feature_dim, vocab_size_with_blank,
//   u32 entry count, then per entry:
//     u32 name length, name bytes, u32 rows, u32 cols, u8 trainable,
//     rows*cols float64 row-major.
struct Checkpoint {
  EncoderConfig config;
  ParameterSet params;
};

void WriteCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint ReadCheckpoint(const std::string& path);

}  // namespace ctclab::nn

#endif  // CTCLAB_NN_CHECKPOINT_H_

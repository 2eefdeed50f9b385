// nn/encoder.h

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

#ifndef CTCLAB_NN_ENCODER_H_
#define CTCLAB_NN_ENCODER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "base/rng.h"
#include "base/sequence.h"
#include "ctc/posteriors.h"
#include "nn/parameter-set.h"
#include "nn/tape.h"

namespace ctclab::nn {

// Normalization used in the convolution module; the single swappable
// element of the block.  Instance and layer normalization are the group
// sizes 1-per-channel and all-channels extremes of group normalization.
struct NormKind {
  enum Kind { kBatch, kGroup, kInstance, kLayer };

  Kind kind = kGroup;
  int num_groups = 8;  // meaningful for kGroup only

  // Group count realizing this kind over d_model channels.
  int EffectiveGroups(int d_model) const;
  bool UsesRunningStats() const { return kind == kBatch; }

  static NormKind Batch() { return {kBatch, 0}; }
  static NormKind Group(int groups) { return {kGroup, groups}; }
  static NormKind Instance() { return {kInstance, 0}; }
  static NormKind Layer() { return {kLayer, 0}; }

  std::string Name() const;
  static NormKind FromName(const std::string& name, int num_groups);

  bool operator==(const NormKind&) const = default;
};

struct EncoderConfig {
  int num_blocks = 2;
  int d_model = 32;
  int num_heads = 4;
  int d_ff = 128;
  int conv_kernel = 7;
  NormKind norm_kind = NormKind::Group(8);
  int subsample_factor = 2;
  int feature_dim = 8;
  int vocab_size_with_blank = 13;

  void Validate() const;

  bool operator==(const EncoderConfig&) const = default;
};

// Attention score bias is learned per clipped relative offset in
// [-kRelPosWindow, kRelPosWindow], per head.
inline constexpr int kRelPosWindow = 8;
inline constexpr double kNormEpsilon = 1e-5;
// Running-statistics momentum for batch normalization.
inline constexpr double kBnStatMomentum = 0.9;

// Fresh parameters (weights, affine gains/biases, BN running statistics)
// for the configured stack, reproducible from the seed.
ParameterSet InitEncoderParameters(const EncoderConfig& cfg, uint64_t seed);

enum class Mode { kTrain, kEval };

// Activation tape of one forward pass.  Holds copies of the activations it
// needs, plus a version pin on the parameter set it was built from: calling
// EncoderBackward after the parameters changed raises InternalError.
class EncoderForwardResult {
 public:
  const FramePosteriors& posteriors() const { return posteriors_; }

  // Proposed running-statistic values from a train-mode pass (BN only).
  struct StatUpdate {
    int entry_index;
    Matrix new_value;
  };
  const std::vector<StatUpdate>& stat_updates() const { return stat_updates_; }

 private:
  friend EncoderForwardResult EncoderForward(const ParameterSet&,
                                             const EncoderConfig&,
                                             const FeatureSequence&, Mode,
                                             Rng*);
  friend ParameterSet EncoderBackward(EncoderForwardResult&, const Matrix&);

  FramePosteriors posteriors_;
  Tape tape_;
  Var posterior_var_;
  std::vector<std::pair<int, Var>> param_vars_;  // entry index -> leaf
  std::vector<StatUpdate> stat_updates_;
  const ParameterSet* source_ = nullptr;
  uint64_t source_version_ = 0;
};

// Runs the encoder stack: frame stacking by the subsample factor, then
// per block macaron feed-forward / self-attention with relative position
// bias / depthwise-separable convolution with the configured norm /
// feed-forward, and a final projection to log-softmax posteriors.
//
// Output length is ceil(T / subsample_factor).  Eval mode is a pure
// function of (params, features).  The rng argument is reserved for
// stochastic layers; the current stack draws nothing from it
// (augmentation happens outside the encoder).
EncoderForwardResult EncoderForward(const ParameterSet& params,
                                    const EncoderConfig& cfg,
                                    const FeatureSequence& features, Mode mode,
                                    Rng* rng = nullptr);

// Exact reverse-mode gradient of a scalar loss with respect to every
// parameter, given d loss / d posteriors.  Non-trainable entries get zero.
ParameterSet EncoderBackward(EncoderForwardResult& fwd,
                             const Matrix& posterior_grad);

// Writes the proposed running-statistic values into params.
void ApplyStatUpdates(const EncoderForwardResult& fwd, ParameterSet* params);

}  // namespace ctclab::nn

#endif  // CTCLAB_NN_ENCODER_H_

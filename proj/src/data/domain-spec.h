// data/domain-spec.h

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

#ifndef CTCLAB_DATA_DOMAIN_SPEC_H_
#define CTCLAB_DATA_DOMAIN_SPEC_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "base/sequence.h"

namespace ctclab::data {

// Everything needed to synthesize one speech-like domain: an order-2
// token grammar, per-token feature prototypes, duration ranges, noise,
// and an orthogonal prototype rotation.  Fully value-typed so manifests
// can reproduce datasets byte-for-byte.
struct DomainSpec {
  std::vector<std::string> tokens;

  // (V+1) x (V+1) transition table.  Row 0 is the begin state, row 1+i
  // follows token i.  Columns 0..V-1 pick the next token, column V ends
  // the sentence.  Rows sum to 1.
  Matrix grammar;

  // V x D mean vectors.
  Matrix prototypes;

  // Per-token inclusive frame-count range.
  std::vector<std::pair<int, int>> durations;

  double noise_std = 0.3;

  // Givens rotations applied to the prototypes at render time, one angle
  // (radians) per dimension pair (0,1), (2,3), ...; empty = identity.
  std::vector<double> rotation_angles;

  uint64_t seed = 0;  // grammar/prototype construction seed (provenance)

  int min_sentence_len = 3;
  int max_sentence_len = 12;

  int num_tokens() const { return static_cast<int>(tokens.size()); }
  int feature_dim() const { return static_cast<int>(prototypes.cols()); }
  int end_column() const { return num_tokens(); }

  // Orthogonal D x D matrix realized by the angle list.
  Matrix RotationMatrix() const;

  void Validate() const;

  bool operator==(const DomainSpec&) const;
};

// Stationary distribution of the token-to-token chain (end transitions
// renormalized away); also used as the begin-state row so sentences are
// stationary from the first token.
Vector StationaryTokenDistribution(const Matrix& grammar);

// Scalar knobs from which concrete DomainSpecs are constructed.
struct DatagenConfig {
  int num_tokens = 12;
  int feature_dim = 8;
  int duration_min = 2;
  int duration_max = 5;
  int sentence_min = 3;
  int sentence_max = 12;
  double base_noise_std = 0.3;
  double out_noise_std = 0.5;
  double out_rotation_deg = 15.0;
  int grammar_branching = 4;   // successors per token
  double end_prob = 0.18;      // end mass per row past the minimum length
  int labeled_size = 48;
  int unlabeled_small = 144;
  int unlabeled_large = 432;
  int dev_size = 48;
  int test_size = 48;
  int lm_text_sentences = 400;
  uint64_t base_seed = 17;

  void Validate() const;
};

// The base (labeled) domain, derived deterministically from the seed.
DomainSpec BuildBaseDomain(const DatagenConfig& cfg);
// The shifted domain: reshuffled grammar, rotated prototypes, more noise.
DomainSpec BuildShiftedDomain(const DatagenConfig& cfg);

}  // namespace ctclab::data

#endif  // CTCLAB_DATA_DOMAIN_SPEC_H_

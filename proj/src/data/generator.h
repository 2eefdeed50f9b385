// data/generator.h

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

#ifndef CTCLAB_DATA_GENERATOR_H_
#define CTCLAB_DATA_GENERATOR_H_

#include <string>

#include "base/rng.h"
#include "data/dataset.h"

namespace ctclab::data {

// Markov walk over the grammar from the begin state: the end transition
// is suppressed below the minimum length and forced at the maximum.
LabelSequence SampleSentence(const DomainSpec& spec, Rng& rng);

// Each token emits a duration-range count of frames of
// rotation * prototype + N(0, noise_std^2) noise.
FeatureSequence RenderFeatures(const LabelSequence& sentence,
                               const DomainSpec& spec, Rng& rng);

// Builds the manifest for a named semi-supervised setting and generates
// it.  The labeled set always comes from the base domain; out_domain
// swaps the unlabeled/dev/test domain for the shifted one.
SplitDataset MakeSetting(const DatagenConfig& cfg, const std::string& name);

DatasetManifest BuildManifest(const DatagenConfig& cfg,
                              const std::string& name);

}  // namespace ctclab::data

#endif  // CTCLAB_DATA_GENERATOR_H_

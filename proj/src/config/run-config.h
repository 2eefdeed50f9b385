// config/run-config.h

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

#ifndef CTCLAB_CONFIG_RUN_CONFIG_H_
#define CTCLAB_CONFIG_RUN_CONFIG_H_

#include <string>
#include <vector>

#include "augment/spec-augment.h"
#include "ctc/prefix-beam-search.h"
#include "data/domain-spec.h"
#include "lm/ngram-lm.h"
#include "nn/encoder.h"
#include "ssl/trainer.h"

namespace ctclab::config {

struct LmConfig {
  int order = 3;
  lm::Smoothing smoothing = lm::Smoothing::WittenBell();
  // Optional external text file; empty means the dataset's lm corpus plus
  // the labeled transcripts.
  std::string corpus;
};

struct PathsConfig {
  std::string workdir = "work";
};

// One experiment = one JSON file with these sections, plus repeatable
// `--set section.key=value` command-line overrides.
struct RunConfig {
  data::DatagenConfig datagen;
  nn::EncoderConfig encoder;
  aug::AugmentPolicy augment;
  ssl::TrainConfig train;
  BeamConfig beam;
  LmConfig lm;
  PathsConfig paths;

  void Validate() const;
};

RunConfig DefaultRunConfig();

std::string SerializeRunConfig(const RunConfig& cfg);
RunConfig ParseRunConfig(const std::string& json_text,
                         const std::string& name_for_errors);

RunConfig LoadRunConfigFile(const std::string& path);
void WriteRunConfigFile(const std::string& path, const RunConfig& cfg);

// Applies one `section.key=value` override; the value is parsed as JSON
// when possible, else taken as a string.
RunConfig ApplyOverride(const RunConfig& cfg, const std::string& assignment);

}  // namespace ctclab::config

#endif  // CTCLAB_CONFIG_RUN_CONFIG_H_

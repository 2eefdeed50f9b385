// data/generator.cc

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

#include "data/generator.h"

#include "base/error.h"

namespace ctclab::data {

namespace {

int DrawFromRow(const Matrix& grammar, int row, bool allow_end, Rng& rng) {
  const int end_col = static_cast<int>(grammar.cols()) - 1;
  double mass = allow_end ? 1.0 : grammar.row(row).head(end_col).sum();
  std::uniform_real_distribution<double> unit(0.0, mass);
  double u = unit(rng);
  double acc = 0.0;
  const int last = allow_end ? end_col : end_col - 1;
  for (int c = 0; c <= last; ++c) {
    acc += grammar(row, c);
    if (u < acc) return c;
  }
  return last;
}

}  // namespace

LabelSequence SampleSentence(const DomainSpec& spec, Rng& rng) {
  const int end_col = spec.end_column();
  LabelSequence sentence;
  int state_row = 0;  // begin
  while (static_cast<int>(sentence.size()) < spec.max_sentence_len) {
    bool allow_end =
        static_cast<int>(sentence.size()) >= spec.min_sentence_len;
    int draw = DrawFromRow(spec.grammar, state_row, allow_end, rng);
    if (draw == end_col) break;
    sentence.push_back(draw);
    state_row = draw + 1;
  }
  return sentence;
}

FeatureSequence RenderFeatures(const LabelSequence& sentence,
                               const DomainSpec& spec, Rng& rng) {
  const int dim = spec.feature_dim();
  Matrix rotation = spec.RotationMatrix();
  std::normal_distribution<double> noise(0.0, spec.noise_std);
  std::vector<Vector> frames;
  for (int y : sentence) {
    if (y < 0 || y >= spec.num_tokens()) {
      throw InputDomainError("sentence token has no prototype: " +
                             std::to_string(y));
    }
    const auto& [lo, hi] = spec.durations[y];
    int duration = std::uniform_int_distribution<int>(lo, hi)(rng);
    Vector mean = rotation * spec.prototypes.row(y).transpose();
    for (int f = 0; f < duration; ++f) {
      Vector frame = mean;
      if (spec.noise_std > 0.0) {
        for (int d = 0; d < dim; ++d) frame(d) += noise(rng);
      }
      frames.push_back(std::move(frame));
    }
  }
  Matrix out(frames.size(), dim);
  for (size_t f = 0; f < frames.size(); ++f) out.row(f) = frames[f];
  return FeatureSequence{std::move(out)};
}

DatasetManifest BuildManifest(const DatagenConfig& cfg,
                              const std::string& name) {
  cfg.Validate();
  DatasetManifest m;
  m.setting = name;
  m.base_seed = cfg.base_seed;
  m.base = BuildBaseDomain(cfg);
  if (name == "in_domain_small") {
    m.target = m.base;
    m.unlabeled_size = cfg.unlabeled_small;
  } else if (name == "in_domain_large") {
    m.target = m.base;
    m.unlabeled_size = cfg.unlabeled_large;
  } else if (name == "out_domain") {
    m.target = BuildShiftedDomain(cfg);
    m.unlabeled_size = cfg.unlabeled_small;
  } else {
    throw ConfigError("unknown setting name: " + name);
  }
  m.labeled_size = cfg.labeled_size;
  m.dev_size = cfg.dev_size;
  m.test_size = cfg.test_size;
  m.lm_text_sentences = cfg.lm_text_sentences;
  m.labeled_seed = DeriveSeed(cfg.base_seed, "split-labeled");
  m.unlabeled_seed = DeriveSeed(cfg.base_seed, "split-unlabeled");
  m.dev_seed = DeriveSeed(cfg.base_seed, "split-dev");
  m.test_seed = DeriveSeed(cfg.base_seed, "split-test");
  m.lmtext_seed = DeriveSeed(cfg.base_seed, "split-lmtext");
  return m;
}

SplitDataset GenerateFromManifest(const DatasetManifest& manifest) {
  manifest.base.Validate();
  manifest.target.Validate();
  SplitDataset ds;
  ds.manifest = manifest;

  auto generate = [](const DomainSpec& spec, uint64_t split_seed, int count,
                     auto&& emit) {
    for (int i = 0; i < count; ++i) {
      Rng rng = MakeRng(DeriveSeed(split_seed, "sample",
                                   {static_cast<uint64_t>(i)}));
      LabelSequence sentence = SampleSentence(spec, rng);
      emit(std::move(sentence), spec, rng);
    }
  };

  generate(manifest.base, manifest.labeled_seed, manifest.labeled_size,
           [&](LabelSequence s, const DomainSpec& spec, Rng& rng) {
             FeatureSequence f = RenderFeatures(s, spec, rng);
             ds.labeled.push_back({std::move(f), std::move(s)});
           });
  generate(manifest.target, manifest.unlabeled_seed, manifest.unlabeled_size,
           [&](LabelSequence s, const DomainSpec& spec, Rng& rng) {
             ds.unlabeled.push_back(RenderFeatures(s, spec, rng));
             ds.unlabeled_truth_.push_back(std::move(s));
           });
  generate(manifest.target, manifest.dev_seed, manifest.dev_size,
           [&](LabelSequence s, const DomainSpec& spec, Rng& rng) {
             FeatureSequence f = RenderFeatures(s, spec, rng);
             ds.dev.push_back({std::move(f), std::move(s)});
           });
  generate(manifest.target, manifest.test_seed, manifest.test_size,
           [&](LabelSequence s, const DomainSpec& spec, Rng& rng) {
             FeatureSequence f = RenderFeatures(s, spec, rng);
             ds.test.push_back({std::move(f), std::move(s)});
           });
  generate(manifest.base, manifest.lmtext_seed, manifest.lm_text_sentences,
           [&](LabelSequence s, const DomainSpec&, Rng&) {
             ds.lm_text.push_back(std::move(s));
           });
  return ds;
}

SplitDataset MakeSetting(const DatagenConfig& cfg, const std::string& name) {
  return GenerateFromManifest(BuildManifest(cfg, name));
}

}  // namespace ctclab::data

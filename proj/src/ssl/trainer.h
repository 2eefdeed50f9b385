// ssl/trainer.h

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

#ifndef CTCLAB_SSL_TRAINER_H_
#define CTCLAB_SSL_TRAINER_H_

#include <span>

#include "augment/spec-augment.h"
#include "ctc/prefix-beam-search.h"
#include "data/dataset.h"
#include "nn/encoder.h"
#include "ssl/optimizer.h"
#include "ssl/run-log.h"

namespace ctclab::ssl {

struct TrainConfig {
  int epochs = 40;           // seed training
  int batch_size = 8;
  OptimizerConfig optimizer;
  LrSchedule lr_schedule = LrSchedule::kConstant;
  int warmup_steps = 150;
  double grad_clip_norm = 5.0;
  uint64_t seed = 1;
  double w = 0.5;            // seed retention per epoch, alpha = w^(1/K)
  int ipl_iters = 4;
  int ipl_epochs_per_iter = 10;
  int mpl_epochs = 40;
  int checkpoint_avg_n = 10;         // final model: best-N by val TER
  double sup_ratio_override = -1.0;  // <= 0: natural N:M exposure

  void Validate() const;
};

// Checkpoints kept after each IPL iteration's tail averaging.
inline constexpr int kIplAverageTail = 5;

struct TrainResult {
  nn::ParameterSet params;
  RunLog log;
};

struct MplResult {
  nn::ParameterSet online;   // primary output, best-N averaged
  nn::ParameterSet offline;  // EMA model at the end of training
  RunLog log;
};

// Supervised seed training on the labeled set, with augmentation.
// Emits one checkpoint per epoch and returns the average of the
// checkpoint_avg_n checkpoints with the best validation token error rate.
// Deterministic given (configs, seed).  Throws ConfigError when no labeled
// sample is reachable under CTC.
TrainResult TrainSeed(const data::SplitDataset& data,
                      const nn::EncoderConfig& enc,
                      const aug::AugmentPolicy& policy,
                      const TrainConfig& cfg);

// Top-1 LM-fused beam hypotheses for each unlabeled sample, in input
// order.  Empty hypotheses are allowed.
std::vector<LabelSequence> GeneratePseudoLabels(
    const nn::ParameterSet& params, const nn::EncoderConfig& enc,
    std::span<const FeatureSequence> unlabeled, const Vocabulary& vocab,
    const BeamConfig& beam, const PrefixScorer* lm);

// Iterative pseudo-labeling: ipl_iters rounds of (regenerate labels with
// the current model + LM, train ipl_epochs_per_iter epochs on the union,
// average the last kIplAverageTail checkpoints).  ipl_iters == 1 is plain
// pseudo-labeling.
TrainResult RunIpl(const nn::ParameterSet& init,
                   const data::SplitDataset& data,
                   const nn::EncoderConfig& enc,
                   const aug::AugmentPolicy& policy, const TrainConfig& cfg,
                   const BeamConfig& beam, const PrefixScorer* lm);

// Momentum pseudo-labeling: online and offline models both start from
// init.  Labeled batches use ground truth; unlabeled batches train on
// best-path labels the offline model produces on the unaugmented input.
// After every online update the offline model takes an EMA step with
// alpha = w^(1/K), K the realized updates per epoch (asserted).  Returns
// the online model (best-N checkpoint average) for final evaluation.
MplResult RunMpl(const nn::ParameterSet& init, const data::SplitDataset& data,
                 const nn::EncoderConfig& enc,
                 const aug::AugmentPolicy& policy, const TrainConfig& cfg);

// Greedy-decode WER of params on a labeled example set, in percent.
double EvaluateGreedyWer(const nn::ParameterSet& params,
                         const nn::EncoderConfig& enc,
                         std::span<const data::LabeledExample> examples,
                         const Vocabulary& vocab);

}  // namespace ctclab::ssl

#endif  // CTCLAB_SSL_TRAINER_H_

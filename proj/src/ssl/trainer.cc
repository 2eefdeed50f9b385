// ssl/trainer.cc

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

#include "ssl/trainer.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"
#include "base/log.h"
#include "ctc/ctc-loss.h"
#include "metrics/wer.h"
#include "nn/ema.h"
#include "ssl/batching.h"

namespace ctclab::ssl {

namespace {

using nn::EncoderConfig;
using nn::EncoderForward;
using nn::Mode;
using nn::ParameterSet;

void CheckSomeTargetReachable(const data::SplitDataset& data,
                              const EncoderConfig& enc) {
  for (const auto& ex : data.labeled) {
    int out_frames =
        (ex.features.length() + enc.subsample_factor - 1) /
        enc.subsample_factor;
    int repeats = 0;
    for (size_t i = 1; i < ex.transcript.size(); ++i) {
      if (ex.transcript[i] == ex.transcript[i - 1]) ++repeats;
    }
    if (out_frames >=
        static_cast<int>(ex.transcript.size()) + repeats) {
      return;
    }
  }
  throw ConfigError(
      "no labeled sample is reachable under CTC (inputs too short for "
      "their transcripts at this subsampling)");
}

// One gradient step over a homogeneous batch.  Returns the summed loss
// and the number of contributing (non-skipped) samples.
struct StepOutcome {
  double loss_sum = 0.0;
  int contributing = 0;
  int skipped = 0;
};

struct SampleRef {
  const FeatureSequence* features;
  const LabelSequence* target;
  uint64_t augment_stream;  // per-sample augmentation stream id
};

StepOutcome TrainStep(ParameterSet& params, Optimizer& optimizer,
                      const EncoderConfig& enc,
                      const aug::AugmentPolicy& policy,
                      const TrainConfig& cfg,
                      std::span<const SampleRef> batch, int epoch,
                      double lr) {
  StepOutcome outcome;
  ParameterSet grad_sum = params.ZerosLike();
  for (const SampleRef& sample : batch) {
    Rng aug_rng = MakeRng(DeriveSeed(
        cfg.seed, "augment",
        {static_cast<uint64_t>(epoch), sample.augment_stream}));
    FeatureSequence augmented = aug::Apply(policy, *sample.features, aug_rng);
    auto fwd = EncoderForward(params, enc, augmented, Mode::kTrain);
    auto ctc = CtcLossAndGrad(fwd.posteriors(), *sample.target);
    if (!ctc.has_value()) {
      ++outcome.skipped;
      nn::ApplyStatUpdates(fwd, &params);
      continue;
    }
    ParameterSet g = nn::EncoderBackward(fwd, ctc->grad_logp);
    grad_sum.AddScaled(g, 1.0);
    outcome.loss_sum += ctc->loss;
    ++outcome.contributing;
    nn::ApplyStatUpdates(fwd, &params);
  }
  if (outcome.contributing > 0) {
    grad_sum.Scale(1.0 / outcome.contributing);
  }
  ClipGradNorm(grad_sum, cfg.grad_clip_norm);
  optimizer.Step(params, grad_sum, lr);
  return outcome;
}

// Best-N checkpoint selection by validation token error rate (ties go to
// the earlier epoch), then element-wise averaging.
ParameterSet AverageBestCheckpoints(
    const std::vector<std::pair<double, ParameterSet>>& checkpoints, int n) {
  CTCLAB_CHECK(!checkpoints.empty(), "no checkpoints to average");
  std::vector<int> order(checkpoints.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return checkpoints[a].first < checkpoints[b].first;
  });
  int keep = std::min<int>(n, static_cast<int>(order.size()));
  std::vector<ParameterSet> picked;
  picked.reserve(keep);
  for (int i = 0; i < keep; ++i) picked.push_back(checkpoints[order[i]].second);
  return nn::AverageCheckpoints(picked);
}

double ChurnFraction(const std::vector<LabelSequence>& prev,
                     const std::vector<LabelSequence>& cur) {
  if (cur.empty()) return 0.0;
  if (prev.size() != cur.size()) return 0.0;  // first generation
  int changed = 0;
  for (size_t i = 0; i < cur.size(); ++i) {
    if (prev[i] != cur[i]) ++changed;
  }
  return static_cast<double>(changed) / static_cast<double>(cur.size());
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 1 || batch_size < 1 || mpl_epochs < 1 || ipl_iters < 1 ||
      ipl_epochs_per_iter < 1 || checkpoint_avg_n < 1) {
    throw ConfigError("train config counts must be positive");
  }
  if (!(w > 0.0) || w > 1.0) throw ConfigError("w must lie in (0, 1]");
  if (grad_clip_norm < 0.0) throw ConfigError("grad_clip_norm must be >= 0");
  optimizer.Validate();
}

double EvaluateGreedyWer(const ParameterSet& params, const EncoderConfig& enc,
                         std::span<const data::LabeledExample> examples,
                         const Vocabulary& vocab) {
  if (examples.empty()) return 0.0;
  std::vector<LabelSequence> refs, hyps;
  for (const auto& ex : examples) {
    auto fwd = EncoderForward(params, enc, ex.features, Mode::kEval);
    hyps.push_back(BestPathDecode(fwd.posteriors(), vocab));
    refs.push_back(ex.transcript);
  }
  return metrics::CorpusBreakdown(refs, hyps).WerPercent();
}

TrainResult TrainSeed(const data::SplitDataset& data,
                      const EncoderConfig& enc,
                      const aug::AugmentPolicy& policy,
                      const TrainConfig& cfg) {
  cfg.Validate();
  enc.Validate();
  if (data.labeled.empty()) throw ConfigError("labeled set is empty");
  CheckSomeTargetReachable(data, enc);
  Vocabulary vocab = data.vocab();

  ParameterSet params = nn::InitEncoderParameters(enc, cfg.seed);
  Optimizer optimizer(cfg.optimizer, params);
  std::vector<std::pair<double, ParameterSet>> checkpoints;
  RunLog log;
  int64_t global_step = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    auto batches = ComposeBatches(static_cast<int>(data.labeled.size()), 0,
                                  cfg.batch_size, cfg.seed, epoch);
    double loss_sum = 0.0;
    int contributing = 0, skipped = 0;
    for (const Batch& batch : batches) {
      std::vector<SampleRef> refs;
      refs.reserve(batch.indices.size());
      for (int idx : batch.indices) {
        refs.push_back({&data.labeled[idx].features,
                        &data.labeled[idx].transcript,
                        static_cast<uint64_t>(idx)});
      }
      ++global_step;
      double lr = ScheduledLr(cfg.optimizer.lr, cfg.lr_schedule,
                              cfg.warmup_steps, global_step);
      StepOutcome so =
          TrainStep(params, optimizer, enc, policy, cfg, refs, epoch, lr);
      loss_sum += so.loss_sum;
      contributing += so.contributing;
      skipped += so.skipped;
    }
    EpochRecord record;
    record.epoch = epoch;
    record.sup_loss = contributing > 0 ? loss_sum / contributing : 0.0;
    record.val_wer = EvaluateGreedyWer(params, enc, data.dev, vocab);
    record.val_ter = record.val_wer;
    record.skipped = skipped;
    log.Append(record);
    checkpoints.push_back({record.val_ter, params});
  }
  return {AverageBestCheckpoints(checkpoints, cfg.checkpoint_avg_n),
          std::move(log)};
}

std::vector<LabelSequence> GeneratePseudoLabels(
    const ParameterSet& params, const EncoderConfig& enc,
    std::span<const FeatureSequence> unlabeled, const Vocabulary& vocab,
    const BeamConfig& beam, const PrefixScorer* lm) {
  beam.Validate();
  std::vector<LabelSequence> labels;
  labels.reserve(unlabeled.size());
  for (const FeatureSequence& features : unlabeled) {
    auto fwd = EncoderForward(params, enc, features, Mode::kEval);
    auto hyps = PrefixBeamSearch(fwd.posteriors(), vocab, beam, lm);
    CTCLAB_CHECK(!hyps.empty(), "beam search returned no hypothesis");
    labels.push_back(hyps[0].labels);
  }
  return labels;
}

TrainResult RunIpl(const ParameterSet& init, const data::SplitDataset& data,
                   const EncoderConfig& enc,
                   const aug::AugmentPolicy& policy, const TrainConfig& cfg,
                   const BeamConfig& beam, const PrefixScorer* lm) {
  cfg.Validate();
  enc.Validate();
  Vocabulary vocab = data.vocab();
  ParameterSet params = init;
  Optimizer optimizer(cfg.optimizer, params);
  RunLog log;
  std::vector<LabelSequence> labels;
  int64_t global_step = 0;
  int global_epoch = 0;

  for (int iter = 1; iter <= cfg.ipl_iters; ++iter) {
    std::vector<LabelSequence> fresh = GeneratePseudoLabels(
        params, enc, data.unlabeled, vocab, beam, lm);
    double churn = ChurnFraction(labels, fresh);
    labels = std::move(fresh);

    std::vector<std::pair<double, ParameterSet>> tail;
    for (int e = 1; e <= cfg.ipl_epochs_per_iter; ++e) {
      ++global_epoch;
      auto batches = ComposeBatches(
          static_cast<int>(data.labeled.size()),
          static_cast<int>(data.unlabeled.size()), cfg.batch_size, cfg.seed,
          global_epoch, cfg.sup_ratio_override);
      double sup_sum = 0.0, unsup_sum = 0.0;
      int sup_n = 0, unsup_n = 0, skipped = 0;
      for (const Batch& batch : batches) {
        std::vector<SampleRef> refs;
        refs.reserve(batch.indices.size());
        for (int idx : batch.indices) {
          if (batch.labeled) {
            refs.push_back({&data.labeled[idx].features,
                            &data.labeled[idx].transcript,
                            static_cast<uint64_t>(idx)});
          } else {
            refs.push_back({&data.unlabeled[idx], &labels[idx],
                            static_cast<uint64_t>(data.labeled.size() + idx)});
          }
        }
        ++global_step;
        double lr = ScheduledLr(cfg.optimizer.lr, cfg.lr_schedule,
                                cfg.warmup_steps, global_step);
        StepOutcome so = TrainStep(params, optimizer, enc, policy, cfg, refs,
                                   global_epoch, lr);
        (batch.labeled ? sup_sum : unsup_sum) += so.loss_sum;
        (batch.labeled ? sup_n : unsup_n) += so.contributing;
        skipped += so.skipped;
      }
      EpochRecord record;
      record.epoch = global_epoch;
      record.sup_loss = sup_n > 0 ? sup_sum / sup_n : 0.0;
      record.unsup_loss = unsup_n > 0 ? unsup_sum / unsup_n : 0.0;
      record.val_wer = EvaluateGreedyWer(params, enc, data.dev, vocab);
      record.val_ter = record.val_wer;
      record.pl_churn = (e == 1) ? churn : 0.0;
      record.skipped = skipped;
      log.Append(record);
      tail.push_back({record.val_ter, params});
      if (static_cast<int>(tail.size()) > kIplAverageTail) {
        tail.erase(tail.begin());
      }
    }
    // Stabilize the next labeling pass on the tail average.
    std::vector<ParameterSet> last;
    last.reserve(tail.size());
    for (auto& [ter, ckpt] : tail) last.push_back(std::move(ckpt));
    params = nn::AverageCheckpoints(last);
  }
  return {std::move(params), std::move(log)};
}

MplResult RunMpl(const ParameterSet& init, const data::SplitDataset& data,
                 const EncoderConfig& enc, const aug::AugmentPolicy& policy,
                 const TrainConfig& cfg) {
  cfg.Validate();
  enc.Validate();
  Vocabulary vocab = data.vocab();
  ParameterSet online = init;
  ParameterSet offline = init;
  Optimizer optimizer(cfg.optimizer, online);
  RunLog log;
  std::vector<std::pair<double, ParameterSet>> checkpoints;
  std::vector<LabelSequence> prev_labels;
  int64_t global_step = 0;

  for (int epoch = 1; epoch <= cfg.mpl_epochs; ++epoch) {
    auto batches = ComposeBatches(
        static_cast<int>(data.labeled.size()),
        static_cast<int>(data.unlabeled.size()), cfg.batch_size, cfg.seed,
        epoch, cfg.sup_ratio_override);
    const int steps_per_epoch = static_cast<int>(batches.size());
    const double alpha = nn::MomentumFromWeight(cfg.w, steps_per_epoch);

    std::vector<LabelSequence> epoch_labels(data.unlabeled.size());
    double sup_sum = 0.0, unsup_sum = 0.0;
    int sup_n = 0, unsup_n = 0, skipped = 0;
    int realized_updates = 0;

    for (const Batch& batch : batches) {
      std::vector<LabelSequence> batch_labels;
      std::vector<SampleRef> refs;
      refs.reserve(batch.indices.size());
      if (batch.labeled) {
        for (int idx : batch.indices) {
          refs.push_back({&data.labeled[idx].features,
                          &data.labeled[idx].transcript,
                          static_cast<uint64_t>(idx)});
        }
      } else {
        // On-the-fly labeling: the offline model best-path-decodes the
        // raw, unaugmented input.
        batch_labels.reserve(batch.indices.size());
        for (int idx : batch.indices) {
          auto fwd =
              EncoderForward(offline, enc, data.unlabeled[idx], Mode::kEval);
          batch_labels.push_back(BestPathDecode(fwd.posteriors(), vocab));
        }
        for (size_t i = 0; i < batch.indices.size(); ++i) {
          int idx = batch.indices[i];
          epoch_labels[idx] = batch_labels[i];
          refs.push_back({&data.unlabeled[idx], &batch_labels[i],
                          static_cast<uint64_t>(data.labeled.size() + idx)});
        }
      }
      ++global_step;
      double lr = ScheduledLr(cfg.optimizer.lr, cfg.lr_schedule,
                              cfg.warmup_steps, global_step);
      StepOutcome so =
          TrainStep(online, optimizer, enc, policy, cfg, refs, epoch, lr);
      (batch.labeled ? sup_sum : unsup_sum) += so.loss_sum;
      (batch.labeled ? sup_n : unsup_n) += so.contributing;
      skipped += so.skipped;
      ++realized_updates;
      // Eq. "after every update of the online model", supervised included.
      nn::EmaUpdateInPlace(offline, online, alpha);
    }
    CTCLAB_CHECK(realized_updates == steps_per_epoch,
                 "K used for the momentum weight must equal the realized "
                 "update count");

    EpochRecord record;
    record.epoch = epoch;
    record.sup_loss = sup_n > 0 ? sup_sum / sup_n : 0.0;
    record.unsup_loss = unsup_n > 0 ? unsup_sum / unsup_n : 0.0;
    record.val_wer = EvaluateGreedyWer(online, enc, data.dev, vocab);
    record.val_ter = record.val_wer;
    record.pl_churn = ChurnFraction(prev_labels, epoch_labels);
    record.skipped = skipped;
    log.Append(record);
    prev_labels = std::move(epoch_labels);
    checkpoints.push_back({record.val_ter, online});
  }

  MplResult result{
      AverageBestCheckpoints(checkpoints, cfg.checkpoint_avg_n),
      std::move(offline), std::move(log)};
  return result;
}

}  // namespace ctclab::ssl

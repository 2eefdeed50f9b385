// ctc/prefix-beam-search.cc

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

#include "ctc/prefix-beam-search.h"

#include <algorithm>
#include <map>

#include "base/error.h"
#include "base/math-util.h"

namespace ctclab {

void BeamConfig::Validate() const {
  if (beam_size < 1) throw ConfigError("beam_size must be positive");
  if (prune_threshold < 0.0) {
    throw ConfigError("prune_threshold must be non-negative");
  }
  if (lm_weight < 0.0) throw ConfigError("lm_weight must be non-negative");
  if (nbest < 1) throw ConfigError("nbest must be positive");
  if (nbest > beam_size) throw ConfigError("nbest must be <= beam_size");
}

namespace {

struct PrefixEntry {
  double log_pb = kLogZero;   // mass of paths ending in blank
  double log_pnb = kLogZero;  // mass of paths ending in the last token
  // lm_weight * log P_lm(prefix) + insertion_bonus * |prefix|, fixed per
  // prefix string.
  double fused_bias = 0.0;
  LmState lm_state;

  double Combined() const { return LogAdd(log_pb, log_pnb) + fused_bias; }
};

using Beam = std::map<LabelSequence, PrefixEntry>;

}  // namespace

std::vector<BeamHypothesis> PrefixBeamSearch(const FramePosteriors& post,
                                             const Vocabulary& vocab,
                                             const BeamConfig& cfg,
                                             const PrefixScorer* lm) {
  cfg.Validate();
  if (post.length() > 0 && post.num_labels() != vocab.num_labels()) {
    throw InputDomainError("posterior width does not match vocabulary");
  }
  const bool use_lm = (lm != nullptr && cfg.lm_weight > 0.0);
  if (use_lm && !lm->Compatible(vocab)) {
    throw InputDomainError("LM vocabulary incompatible with decoder vocabulary");
  }

  const int blank = vocab.blank_id();
  Beam beam;
  {
    PrefixEntry root;
    root.log_pb = 0.0;  // empty alignment
    if (use_lm) root.lm_state = lm->InitialState();
    beam.emplace(LabelSequence{}, std::move(root));
  }

  for (int t = 0; t < post.length(); ++t) {
    const auto row = post.log_probs.row(t);
    Beam next;

    auto entry_for = [&](const LabelSequence& prefix, const PrefixEntry& parent,
                         bool extended_by, int token) -> PrefixEntry& {
      auto it = next.find(prefix);
      if (it != next.end()) return it->second;
      PrefixEntry fresh;
      if (extended_by) {
        fresh.fused_bias = parent.fused_bias + cfg.insertion_bonus;
        if (use_lm) {
          fresh.fused_bias +=
              cfg.lm_weight *
              lm->ScoreExtension(parent.lm_state, token, &fresh.lm_state);
        }
      } else {
        fresh.fused_bias = parent.fused_bias;
        fresh.lm_state = parent.lm_state;
      }
      return next.emplace(prefix, std::move(fresh)).first->second;
    };

    for (const auto& [prefix, e] : beam) {
      const double total = LogAdd(e.log_pb, e.log_pnb);

      // Blank keeps the prefix and moves all mass to the blank bucket.
      {
        PrefixEntry& same = entry_for(prefix, e, false, -1);
        same.log_pb = LogAdd(same.log_pb, total + row(blank));
      }

      for (int c = 0; c < blank; ++c) {
        const double pc = row(c);
        if (!prefix.empty() && c == prefix.back()) {
          // Same token again without a blank: collapses into the prefix.
          PrefixEntry& same = entry_for(prefix, e, false, -1);
          same.log_pnb = LogAdd(same.log_pnb, e.log_pnb + pc);
          // Growing the prefix needs the blank-ending mass.
          if (e.log_pb != kLogZero) {
            LabelSequence grown = prefix;
            grown.push_back(c);
            PrefixEntry& ext = entry_for(grown, e, true, c);
            ext.log_pnb = LogAdd(ext.log_pnb, e.log_pb + pc);
          }
        } else if (total != kLogZero) {
          LabelSequence grown = prefix;
          grown.push_back(c);
          PrefixEntry& ext = entry_for(grown, e, true, c);
          ext.log_pnb = LogAdd(ext.log_pnb, total + pc);
        }
      }
    }

    // Score-gap pruning, then width pruning, both on the fused score.
    double best = kLogZero;
    for (const auto& [prefix, e] : next) best = std::max(best, e.Combined());
    std::vector<std::pair<const LabelSequence*, double>> ranked;
    ranked.reserve(next.size());
    for (const auto& [prefix, e] : next) {
      double score = e.Combined();
      if (score >= best - cfg.prune_threshold) ranked.push_back({&prefix, score});
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return *a.first < *b.first;
    });
    if (static_cast<int>(ranked.size()) > cfg.beam_size) {
      ranked.resize(cfg.beam_size);
    }
    Beam pruned;
    for (const auto& [prefix, score] : ranked) {
      pruned.emplace(*prefix, std::move(next.at(*prefix)));
    }
    beam = std::move(pruned);
  }

  std::vector<BeamHypothesis> out;
  out.reserve(beam.size());
  for (const auto& [prefix, e] : beam) {
    double score = e.Combined();
    if (use_lm) score += cfg.lm_weight * lm->ScoreEnd(e.lm_state);
    out.push_back({prefix, score});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.labels < b.labels;
  });
  if (static_cast<int>(out.size()) > cfg.nbest) out.resize(cfg.nbest);
  return out;
}

}  // namespace ctclab

// lm/ngram-lm.h

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

#ifndef CTCLAB_LM_NGRAM_LM_H_
#define CTCLAB_LM_NGRAM_LM_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "base/sequence.h"
#include "ctc/prefix-beam-search.h"
#include "ctc/vocabulary.h"

namespace ctclab::lm {

// Event space of the model: the |V| tokens plus end-of-sentence.  The
// begin-of-sentence marker appears only in contexts, never as an event.
struct Smoothing {
  enum Kind { kAddK, kWittenBell };

  Kind kind = kWittenBell;
  double k = 0.0;  // kAddK only

  static Smoothing AddK(double k) { return {kAddK, k}; }
  static Smoothing WittenBell() { return {kWittenBell, 0.0}; }

  bool operator==(const Smoothing&) const = default;
};

// Backoff n-gram model over token ids.  Probabilities are kept in log10
// (the on-disk convention); the scoring API converts to natural log.
//
// witten_bell: interpolated Witten-Bell, evaluated ARPA-style (stored
// n-gram probability, else backoff weight times the lower order), grounded
// in a uniform base distribution.
//
// add_k: the per-context Dirichlet estimator (c + k) / (c(ctx) + k*E)
// applied with the full-length context; an unobserved context scores
// uniformly.  Retained for counting oracles; not a backoff model.
class NgramModel {
 public:
  int order() const { return order_; }
  int num_tokens() const { return num_tokens_; }
  int eos_id() const { return num_tokens_; }
  int bos_id() const { return num_tokens_ + 1; }
  int num_events() const { return num_tokens_ + 1; }
  uint64_t vocab_hash() const { return vocab_hash_; }
  const Smoothing& smoothing() const { return smoothing_; }

  // log10 P(event | context); context uses the last order-1 ids.
  // event is a token id or eos_id().
  double ScoreLog10(const std::vector<int>& context, int event) const;
  // Natural-log variant used by scoring interfaces.
  double ScoreLn(const std::vector<int>& context, int event) const;

  // All stored n-grams / backoff weights, for serialization and tests.
  const std::map<std::vector<int>, double>& probs() const { return probs_; }
  const std::map<std::vector<int>, double>& backoffs() const {
    return backoffs_;
  }

 private:
  friend NgramModel TrainNgram(const std::vector<LabelSequence>&,
                               const Vocabulary&, int, const Smoothing&);
  friend NgramModel ReadNgramFile(const std::string&, const Vocabulary&);

  int order_ = 1;
  int num_tokens_ = 0;
  uint64_t vocab_hash_ = 0;
  Smoothing smoothing_;
  std::map<std::vector<int>, double> probs_;     // full n-gram -> log10 p
  std::map<std::vector<int>, double> backoffs_;  // context -> log10 bow
};

// Estimates an order-n model from the corpus.  Sentences are padded with
// begin markers and close with an end-of-sentence event.  Deterministic
// given inputs; throws on an empty corpus or out-of-vocabulary ids.
NgramModel TrainNgram(const std::vector<LabelSequence>& corpus,
                      const Vocabulary& vocab, int order,
                      const Smoothing& smoothing);

// exp(-(1/N_events) sum ln P), end-of-sentence events included.
double Perplexity(const NgramModel& model,
                  const std::vector<LabelSequence>& corpus);

// Plain-text table, ARPA-style: a metadata line, \data\ counts, per-order
// sections of "log10prob<TAB>tokens[<TAB>backoff]", \end\.  Floats are
// printed with %.17g so parse -> serialize -> parse is bit-exact.
void WriteNgramFile(const std::string& path, const NgramModel& model,
                    const Vocabulary& vocab);
NgramModel ReadNgramFile(const std::string& path, const Vocabulary& vocab);

// PrefixScorer adapter for beam-search shallow fusion.
class NgramScorer : public PrefixScorer {
 public:
  explicit NgramScorer(const NgramModel& model) : model_(model) {}

  LmState InitialState() const override;
  double ScoreExtension(const LmState& state, int token,
                        LmState* next_state) const override;
  double ScoreEnd(const LmState& state) const override;
  bool Compatible(const Vocabulary& vocab) const override;

 private:
  const NgramModel& model_;
};

}  // namespace ctclab::lm

#endif  // CTCLAB_LM_NGRAM_LM_H_

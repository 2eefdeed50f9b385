// lm/ngram-lm.cc

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

#include "lm/ngram-lm.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "base/error.h"
#include "base/math-util.h"

namespace ctclab::lm {

namespace {

constexpr double kLog10Zero = -std::numeric_limits<double>::infinity();
// ARPA convention for entries that exist only to carry a backoff weight.
constexpr double kDummyLog10 = -99.0;
const double kLn10 = std::log(10.0);

std::vector<int> TrimContext(const std::vector<int>& context, int order) {
  const int keep = order - 1;
  if (static_cast<int>(context.size()) <= keep) return context;
  return std::vector<int>(context.end() - keep, context.end());
}

struct CountTables {
  // Full n-gram -> count, all orders 1..order.
  std::map<std::vector<int>, int64_t> ngrams;
  // Context -> total event count, all lengths 0..order-1.
  std::map<std::vector<int>, int64_t> contexts;
  // Context -> number of distinct event types following it.
  std::map<std::vector<int>, int64_t> distinct;
};

CountTables CountCorpus(const std::vector<LabelSequence>& corpus, int order,
                        int num_tokens, int bos, int eos) {
  CountTables t;
  std::map<std::vector<int>, std::set<int>> followers;
  for (const LabelSequence& sentence : corpus) {
    std::vector<int> padded(order - 1, bos);
    for (int y : sentence) {
      if (y < 0 || y >= num_tokens) {
        throw InputDomainError("corpus token id out of vocabulary: " +
                               std::to_string(y));
      }
      padded.push_back(y);
    }
    padded.push_back(eos);
    const int first_event = order - 1;
    for (int i = first_event; i < static_cast<int>(padded.size()); ++i) {
      for (int n = 1; n <= order; ++n) {
        std::vector<int> ngram(padded.begin() + (i - n + 1),
                               padded.begin() + i + 1);
        std::vector<int> ctx(ngram.begin(), ngram.end() - 1);
        ++t.ngrams[ngram];
        ++t.contexts[ctx];
        followers[ctx].insert(padded[i]);
      }
    }
  }
  for (const auto& [ctx, f] : followers) {
    t.distinct[ctx] = static_cast<int64_t>(f.size());
  }
  return t;
}

// Interpolated Witten-Bell probability, grounded in the uniform base.
double WittenBellProb(const CountTables& t, const std::vector<int>& ngram,
                      int num_events) {
  std::vector<int> ctx(ngram.begin(), ngram.end() - 1);
  auto ctx_it = t.contexts.find(ctx);
  double lower;
  if (ngram.size() == 1) {
    lower = 1.0 / num_events;
  } else {
    lower = WittenBellProb(
        t, std::vector<int>(ngram.begin() + 1, ngram.end()), num_events);
  }
  if (ctx_it == t.contexts.end()) return lower;  // unobserved context level
  auto ng_it = t.ngrams.find(ngram);
  double c = ng_it == t.ngrams.end() ? 0.0 : static_cast<double>(ng_it->second);
  double total = static_cast<double>(ctx_it->second);
  double types = static_cast<double>(t.distinct.at(ctx));
  return (c + types * lower) / (total + types);
}

}  // namespace

NgramModel TrainNgram(const std::vector<LabelSequence>& corpus,
                      const Vocabulary& vocab, int order,
                      const Smoothing& smoothing) {
  if (corpus.empty()) throw InputDomainError("LM corpus must be non-empty");
  if (order < 1) throw ConfigError("n-gram order must be >= 1");
  if (smoothing.kind == Smoothing::kAddK && smoothing.k < 0.0) {
    throw ConfigError("add_k smoothing needs k >= 0");
  }

  NgramModel m;
  m.order_ = order;
  m.num_tokens_ = vocab.size();
  m.vocab_hash_ = vocab.hash();
  m.smoothing_ = smoothing;
  const int eos = m.eos_id();
  const int bos = m.bos_id();
  const int num_events = m.num_events();

  CountTables t = CountCorpus(corpus, order, m.num_tokens_, bos, eos);

  if (smoothing.kind == Smoothing::kWittenBell) {
    for (const auto& [ngram, count] : t.ngrams) {
      (void)count;
      m.probs_[ngram] =
          std::log10(WittenBellProb(t, ngram, num_events));
    }
    for (const auto& [ctx, total] : t.contexts) {
      double types = static_cast<double>(t.distinct.at(ctx));
      m.backoffs_[ctx] =
          std::log10(types / (static_cast<double>(total) + types));
    }
  } else {
    // Dense per-context rows at the scoring context length (order-1) only;
    // the estimator never backs off.
    const double k = smoothing.k;
    for (const auto& [ctx, total] : t.contexts) {
      if (static_cast<int>(ctx.size()) != order - 1) continue;
      for (int event = 0; event <= m.num_tokens_; ++event) {
        std::vector<int> ngram = ctx;
        ngram.push_back(event);
        auto it = t.ngrams.find(ngram);
        double c = it == t.ngrams.end() ? 0.0 : static_cast<double>(it->second);
        double p = (c + k) / (static_cast<double>(total) + k * num_events);
        if (p > 0.0) {
          m.probs_[ngram] = std::log10(p);
        }
      }
    }
  }
  return m;
}

double NgramModel::ScoreLog10(const std::vector<int>& context,
                              int event) const {
  if (event < 0 || event > eos_id()) {
    throw InputDomainError("LM event id out of range: " +
                           std::to_string(event));
  }
  std::vector<int> ctx = TrimContext(context, order_);

  if (smoothing_.kind == Smoothing::kAddK) {
    std::vector<int> ngram = ctx;
    ngram.push_back(event);
    auto it = probs_.find(ngram);
    if (it != probs_.end()) return it->second;
    // Observed context with a missing event only happens at k == 0, where
    // the estimate is zero; an unobserved context scores uniformly.
    auto lb = probs_.lower_bound(ctx);
    if (lb != probs_.end() && lb->first.size() == ctx.size() + 1 &&
        std::equal(ctx.begin(), ctx.end(), lb->first.begin())) {
      return kLog10Zero;
    }
    return std::log10(1.0 / num_events());
  }

  // ARPA-style backoff evaluation.
  double bow_acc = 0.0;
  while (true) {
    std::vector<int> ngram = ctx;
    ngram.push_back(event);
    auto it = probs_.find(ngram);
    if (it != probs_.end()) return bow_acc + it->second;
    if (ctx.empty()) {
      // Below unigrams sits the uniform base distribution.
      auto bo = backoffs_.find(ctx);
      double bow = bo == backoffs_.end() ? 0.0 : bo->second;
      return bow_acc + bow + std::log10(1.0 / num_events());
    }
    auto bo = backoffs_.find(ctx);
    if (bo != backoffs_.end()) bow_acc += bo->second;
    ctx.erase(ctx.begin());
  }
}

double NgramModel::ScoreLn(const std::vector<int>& context, int event) const {
  return ScoreLog10(context, event) * kLn10;
}

double Perplexity(const NgramModel& model,
                  const std::vector<LabelSequence>& corpus) {
  int64_t events = 0;
  double total_ln = 0.0;
  for (const LabelSequence& sentence : corpus) {
    std::vector<int> context(model.order() - 1, model.bos_id());
    for (int y : sentence) {
      total_ln += model.ScoreLn(context, y);
      context.push_back(y);
      ++events;
    }
    total_ln += model.ScoreLn(context, model.eos_id());
    ++events;
  }
  if (events == 0) return 1.0;
  return std::exp(-total_ln / static_cast<double>(events));
}

namespace {

std::string FormatFloat(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string TokenName(int id, const Vocabulary& vocab) {
  if (id < vocab.size()) return vocab.token(id);
  if (id == vocab.size()) return "</s>";
  return "<s>";
}

int TokenId(const std::string& name, const Vocabulary& vocab,
            const std::string& path) {
  if (name == "</s>") return vocab.size();
  if (name == "<s>") return vocab.size() + 1;
  auto id = vocab.id(name);
  if (!id.has_value()) {
    throw IoError("LM file " + path + " holds unknown token: " + name);
  }
  return *id;
}

}  // namespace

void WriteNgramFile(const std::string& path, const NgramModel& model,
                    const Vocabulary& vocab) {
  if (model.vocab_hash() != vocab.hash()) {
    throw InputDomainError("LM/vocabulary hash mismatch on write");
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);

  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, model.vocab_hash());
  os << "ctclab-ngram order=" << model.order() << " smoothing="
     << (model.smoothing().kind == Smoothing::kAddK ? "add_k" : "witten_bell")
     << " k=" << FormatFloat(model.smoothing().k) << " vocab_hash=" << hash
     << "\n\n";

  // Group entries per order; contexts that carry only a backoff weight get
  // a dummy-probability line.
  std::vector<std::map<std::vector<int>, std::pair<double, const double*>>>
      sections(model.order() + 1);
  for (const auto& [ngram, p] : model.probs()) {
    sections[ngram.size()][ngram] = {p, nullptr};
  }
  for (const auto& [ctx, bow] : model.backoffs()) {
    if (ctx.empty()) continue;  // empty-context weight rides the header
    auto& section = sections[ctx.size()];
    auto it = section.find(ctx);
    if (it == section.end()) {
      section[ctx] = {kDummyLog10, &bow};
    } else {
      it->second.second = &bow;
    }
  }
  auto root = model.backoffs().find({});
  os << "\\data\\\n";
  if (root != model.backoffs().end()) {
    os << "base_backoff " << FormatFloat(root->second) << "\n";
  }
  for (int n = 1; n <= model.order(); ++n) {
    os << "ngram " << n << "=" << sections[n].size() << "\n";
  }
  for (int n = 1; n <= model.order(); ++n) {
    os << "\n\\" << n << "-grams:\n";
    for (const auto& [ids, entry] : sections[n]) {
      os << FormatFloat(entry.first);
      std::string sep = "\t";
      for (int id : ids) {
        os << sep << TokenName(id, vocab);
        sep = " ";
      }
      if (entry.second != nullptr) os << "\t" << FormatFloat(*entry.second);
      os << "\n";
    }
  }
  os << "\n\\end\\\n";
  if (!os) throw IoError("write failed: " + path);
}

NgramModel ReadNgramFile(const std::string& path, const Vocabulary& vocab) {
  std::ifstream is(path);
  if (!is) throw IoError("missing input: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("ctclab-ngram ", 0) != 0) {
    throw IoError("not a ctclab LM file: " + path);
  }

  NgramModel m;
  m.num_tokens_ = vocab.size();
  m.vocab_hash_ = vocab.hash();
  {
    std::istringstream head(line.substr(std::strlen("ctclab-ngram ")));
    std::string field;
    uint64_t file_hash = 0;
    while (head >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) continue;
      std::string key = field.substr(0, eq);
      std::string value = field.substr(eq + 1);
      if (key == "order") {
        m.order_ = std::stoi(value);
      } else if (key == "smoothing") {
        m.smoothing_.kind =
            value == "add_k" ? Smoothing::kAddK : Smoothing::kWittenBell;
      } else if (key == "k") {
        m.smoothing_.k = std::strtod(value.c_str(), nullptr);
      } else if (key == "vocab_hash") {
        file_hash = std::stoull(value, nullptr, 16);
      }
    }
    if (file_hash != vocab.hash()) {
      throw InputDomainError("LM file " + path +
                             " was trained on a different vocabulary");
    }
  }

  int section_order = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line == "\\data\\" || line == "\\end\\") continue;
    if (line.rfind("ngram ", 0) == 0) continue;
    if (line.rfind("base_backoff ", 0) == 0) {
      m.backoffs_[{}] =
          std::strtod(line.c_str() + std::strlen("base_backoff "), nullptr);
      continue;
    }
    if (line[0] == '\\') {
      section_order = std::stoi(line.substr(1));
      continue;
    }
    // prob \t tokens [\t backoff]
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() < 2) throw IoError("malformed LM line in " + path);
    double prob = std::strtod(fields[0].c_str(), nullptr);
    std::vector<int> ids;
    std::istringstream toks(fields[1]);
    std::string tok;
    while (toks >> tok) ids.push_back(TokenId(tok, vocab, path));
    if (static_cast<int>(ids.size()) != section_order) {
      throw IoError("LM line order mismatch in " + path);
    }
    if (prob != kDummyLog10) m.probs_[ids] = prob;
    if (fields.size() >= 3) {
      m.backoffs_[ids] = std::strtod(fields[2].c_str(), nullptr);
    }
  }
  return m;
}

LmState NgramScorer::InitialState() const {
  return LmState{std::vector<int>(model_.order() - 1, model_.bos_id())};
}

double NgramScorer::ScoreExtension(const LmState& state, int token,
                                   LmState* next_state) const {
  if (token < 0 || token >= model_.num_tokens()) {
    throw InputDomainError("LM extension token out of vocabulary");
  }
  double score = model_.ScoreLn(state.context, token);
  next_state->context = state.context;
  next_state->context.push_back(token);
  if (static_cast<int>(next_state->context.size()) > model_.order() - 1) {
    next_state->context.erase(
        next_state->context.begin(),
        next_state->context.end() - (model_.order() - 1));
  }
  return score;
}

double NgramScorer::ScoreEnd(const LmState& state) const {
  return model_.ScoreLn(state.context, model_.eos_id());
}

bool NgramScorer::Compatible(const Vocabulary& vocab) const {
  return model_.vocab_hash() == vocab.hash();
}

}  // namespace ctclab::lm

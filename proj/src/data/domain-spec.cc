// data/domain-spec.cc

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

#include "data/domain-spec.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "base/error.h"
#include "base/rng.h"

namespace ctclab::data {

namespace {

const char* kSyllables[] = {"ba", "da", "ge", "ki", "lo", "mu",
                            "ne", "po", "ru", "sa", "ti", "wo"};

std::vector<std::string> TokenNames(int count) {
  std::vector<std::string> names;
  for (int i = 0; i < count; ++i) {
    if (i < static_cast<int>(std::size(kSyllables))) {
      names.push_back(kSyllables[i]);
    } else {
      names.push_back("tk" + std::to_string(i));
    }
  }
  return names;
}

}  // namespace

Matrix DomainSpec::RotationMatrix() const {
  const int dim = feature_dim();
  Matrix rot = Matrix::Identity(dim, dim);
  for (size_t p = 0; p < rotation_angles.size(); ++p) {
    int i = static_cast<int>(2 * p);
    int j = i + 1;
    if (j >= dim) break;
    double a = rotation_angles[p];
    Matrix g = Matrix::Identity(dim, dim);
    g(i, i) = std::cos(a);
    g(j, j) = std::cos(a);
    g(i, j) = -std::sin(a);
    g(j, i) = std::sin(a);
    rot = g * rot;
  }
  return rot;
}

void DomainSpec::Validate() const {
  const int v = num_tokens();
  if (v < 1) throw ConfigError("domain needs at least one token");
  if (grammar.rows() != v + 1 || grammar.cols() != v + 1) {
    throw ConfigError("grammar must be (V+1) x (V+1)");
  }
  for (int r = 0; r <= v; ++r) {
    double sum = grammar.row(r).sum();
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("grammar row " + std::to_string(r) +
                        " does not sum to 1");
    }
    if (grammar.row(r).minCoeff() < 0.0) {
      throw ConfigError("grammar probabilities must be non-negative");
    }
  }
  if (prototypes.rows() != v) {
    throw ConfigError("one prototype per token required");
  }
  if (static_cast<int>(durations.size()) != v) {
    throw ConfigError("one duration range per token required");
  }
  for (const auto& [lo, hi] : durations) {
    if (lo < 1 || hi < lo) throw ConfigError("bad duration range");
  }
  if (noise_std < 0.0) throw ConfigError("noise_std must be >= 0");
  if (min_sentence_len < 1 || max_sentence_len < min_sentence_len) {
    throw ConfigError("bad sentence length bounds");
  }
}

bool DomainSpec::operator==(const DomainSpec& o) const {
  return tokens == o.tokens && grammar == o.grammar &&
         prototypes == o.prototypes && durations == o.durations &&
         noise_std == o.noise_std && rotation_angles == o.rotation_angles &&
         seed == o.seed && min_sentence_len == o.min_sentence_len &&
         max_sentence_len == o.max_sentence_len;
}

Vector StationaryTokenDistribution(const Matrix& grammar) {
  const int v = static_cast<int>(grammar.rows()) - 1;
  // Token-to-token transitions with the end column renormalized away.
  Matrix q(v, v);
  for (int i = 0; i < v; ++i) {
    double mass = grammar.row(i + 1).head(v).sum();
    if (mass <= 0.0) throw ConfigError("token row transitions only to end");
    q.row(i) = grammar.row(i + 1).head(v) / mass;
  }
  Vector pi = Vector::Constant(v, 1.0 / v);
  for (int iter = 0; iter < 2000; ++iter) {
    Vector next = q.transpose() * pi;
    next /= next.sum();
    if ((next - pi).cwiseAbs().maxCoeff() < 1e-15) {
      pi = next;
      break;
    }
    pi = next;
  }
  return pi;
}

void DatagenConfig::Validate() const {
  if (num_tokens < 2 || feature_dim < 2) {
    throw ConfigError("datagen needs >= 2 tokens and >= 2 feature dims");
  }
  if (duration_min < 1 || duration_max < duration_min) {
    throw ConfigError("bad duration range");
  }
  if (sentence_min < 1 || sentence_max < sentence_min) {
    throw ConfigError("bad sentence length range");
  }
  if (grammar_branching < 1 || grammar_branching >= num_tokens) {
    throw ConfigError("grammar_branching must lie in [1, num_tokens)");
  }
  if (end_prob <= 0.0 || end_prob >= 1.0) {
    throw ConfigError("end_prob must lie in (0, 1)");
  }
  if (labeled_size < 1 || unlabeled_small < 0 || unlabeled_large < 0 ||
      dev_size < 1 || test_size < 1 || lm_text_sentences < 0) {
    throw ConfigError("dataset sizes must be positive");
  }
}

namespace {

// Sparse random token chain: every token transitions to `branching`
// successors (never itself) with skewed weights, then mixes in the end
// probability.  The begin row is the chain's stationary distribution, so
// emitted tokens are stationary from position zero.
Matrix BuildGrammar(int num_tokens, int branching, double end_prob,
                    Rng& rng) {
  const int v = num_tokens;
  Matrix grammar = Matrix::Zero(v + 1, v + 1);
  std::uniform_real_distribution<double> unit(0.15, 1.0);
  for (int i = 0; i < v; ++i) {
    std::vector<int> others;
    for (int j = 0; j < v; ++j) {
      if (j != i) others.push_back(j);
    }
    std::shuffle(others.begin(), others.end(), rng);
    double total = 0.0;
    std::vector<double> weights(branching);
    for (int b = 0; b < branching; ++b) {
      double u = unit(rng);
      weights[b] = u * u;  // skew toward a dominant successor
      total += weights[b];
    }
    for (int b = 0; b < branching; ++b) {
      grammar(i + 1, others[b]) = (1.0 - end_prob) * weights[b] / total;
    }
    grammar(i + 1, v) = end_prob;
  }
  Vector pi = StationaryTokenDistribution(grammar);
  for (int j = 0; j < v; ++j) grammar(0, j) = pi(j);
  grammar(0, v) = 0.0;
  return grammar;
}

Matrix BuildPrototypes(int num_tokens, int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix protos(num_tokens, dim);
  for (int t = 0; t < num_tokens; ++t) {
    for (int d = 0; d < dim; ++d) protos(t, d) = normal(rng);
    protos.row(t) *= std::sqrt(static_cast<double>(dim)) /
                     std::max(protos.row(t).norm(), 1e-9);
  }
  return protos;
}

DomainSpec BuildDomain(const DatagenConfig& cfg, uint64_t grammar_seed,
                       double noise_std, double rotation_deg) {
  cfg.Validate();
  DomainSpec spec;
  spec.tokens = TokenNames(cfg.num_tokens);
  spec.seed = grammar_seed;
  Rng grammar_rng = MakeRng(grammar_seed);
  spec.grammar = BuildGrammar(cfg.num_tokens, cfg.grammar_branching,
                              cfg.end_prob, grammar_rng);
  // Prototypes are shared across domains; the shift happens through the
  // rotation and the noise level.
  Rng proto_rng = MakeRng(DeriveSeed(cfg.base_seed, "prototypes"));
  spec.prototypes = BuildPrototypes(cfg.num_tokens, cfg.feature_dim,
                                    proto_rng);
  spec.durations.assign(cfg.num_tokens,
                        {cfg.duration_min, cfg.duration_max});
  spec.noise_std = noise_std;
  if (rotation_deg != 0.0) {
    spec.rotation_angles.assign(cfg.feature_dim / 2,
                                rotation_deg * std::numbers::pi / 180.0);
  }
  spec.min_sentence_len = cfg.sentence_min;
  spec.max_sentence_len = cfg.sentence_max;
  spec.Validate();
  return spec;
}

}  // namespace

DomainSpec BuildBaseDomain(const DatagenConfig& cfg) {
  return BuildDomain(cfg, DeriveSeed(cfg.base_seed, "grammar", {0}),
                     cfg.base_noise_std, 0.0);
}

DomainSpec BuildShiftedDomain(const DatagenConfig& cfg) {
  return BuildDomain(cfg, DeriveSeed(cfg.base_seed, "grammar", {1}),
                     cfg.out_noise_std, cfg.out_rotation_deg);
}

}  // namespace ctclab::data

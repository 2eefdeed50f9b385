// ctc/ctc-loss.cc

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

#include "ctc/ctc-loss.h"

#include <cmath>

#include "base/error.h"
#include "base/math-util.h"

namespace ctclab {

namespace {

void CheckLabelIds(const LabelSequence& target, int num_tokens) {
  for (int y : target) {
    if (y < 0 || y >= num_tokens) {
      throw InputDomainError("target token id out of vocabulary: " +
                             std::to_string(y));
    }
  }
}

// Blank-extended target: [eps, y1, eps, y2, ..., yL, eps].
std::vector<int> ExtendWithBlanks(const LabelSequence& target, int blank) {
  std::vector<int> ext(2 * target.size() + 1, blank);
  for (size_t l = 0; l < target.size(); ++l) ext[2 * l + 1] = target[l];
  return ext;
}

// alpha(t, s): log mass of paths ending in extended-state s at frame t.
Matrix ForwardPass(const Matrix& logp, const std::vector<int>& ext) {
  const int num_frames = static_cast<int>(logp.rows());
  const int num_states = static_cast<int>(ext.size());
  Matrix alpha = Matrix::Constant(num_frames, num_states, kLogZero);
  if (num_frames == 0) return alpha;
  alpha(0, 0) = logp(0, ext[0]);
  if (num_states > 1) alpha(0, 1) = logp(0, ext[1]);
  for (int t = 1; t < num_frames; ++t) {
    for (int s = 0; s < num_states; ++s) {
      double m = alpha(t - 1, s);
      if (s >= 1) m = LogAdd(m, alpha(t - 1, s - 1));
      // Skip transitions jump over a blank, allowed unless the two
      // non-blank states carry the same token (a..a needs the blank).
      if (s >= 2 && ext[s] != ext[s - 2] && ext[s] != ext.back()) {
        m = LogAdd(m, alpha(t - 1, s - 2));
      }
      alpha(t, s) = (m == kLogZero) ? kLogZero : m + logp(t, ext[s]);
    }
  }
  return alpha;
}

Matrix BackwardPass(const Matrix& logp, const std::vector<int>& ext) {
  const int num_frames = static_cast<int>(logp.rows());
  const int num_states = static_cast<int>(ext.size());
  Matrix beta = Matrix::Constant(num_frames, num_states, kLogZero);
  if (num_frames == 0) return beta;
  // beta(t, s) includes the emission at frame t, mirroring alpha.
  beta(num_frames - 1, num_states - 1) =
      logp(num_frames - 1, ext[num_states - 1]);
  if (num_states > 1) {
    beta(num_frames - 1, num_states - 2) =
        logp(num_frames - 1, ext[num_states - 2]);
  }
  for (int t = num_frames - 2; t >= 0; --t) {
    for (int s = num_states - 1; s >= 0; --s) {
      double m = beta(t + 1, s);
      if (s + 1 < num_states) m = LogAdd(m, beta(t + 1, s + 1));
      if (s + 2 < num_states && ext[s] != ext[s + 2] &&
          ext[s + 2] != ext.back()) {
        m = LogAdd(m, beta(t + 1, s + 2));
      }
      beta(t, s) = (m == kLogZero) ? kLogZero : m + logp(t, ext[s]);
    }
  }
  return beta;
}

}  // namespace

LabelSequence Collapse(const Alignment& alignment, const Vocabulary& vocab) {
  const int blank = vocab.blank_id();
  LabelSequence out;
  int prev = -1;
  for (int id : alignment.frames) {
    if (id < 0 || id > blank) {
      throw InputDomainError("alignment id out of range: " +
                             std::to_string(id));
    }
    if (id != prev && id != blank) out.push_back(id);
    prev = id;
  }
  return out;
}

double CtcLogLikelihood(const FramePosteriors& post,
                        const LabelSequence& target) {
  const int num_frames = post.length();
  const int blank = post.num_labels() - 1;
  CheckLabelIds(target, blank);
  if (num_frames == 0) return target.empty() ? 0.0 : kLogZero;
  std::vector<int> ext = ExtendWithBlanks(target, blank);
  Matrix alpha = ForwardPass(post.log_probs, ext);
  const int last = static_cast<int>(ext.size()) - 1;
  double total = alpha(num_frames - 1, last);
  if (last >= 1) total = LogAdd(total, alpha(num_frames - 1, last - 1));
  return total;
}

std::optional<CtcGradients> CtcLossAndGrad(const FramePosteriors& post,
                                           const LabelSequence& target) {
  const int num_frames = post.length();
  const int num_labels = post.num_labels();
  const int blank = num_labels - 1;
  CheckLabelIds(target, blank);

  if (num_frames == 0) {
    if (!target.empty()) return std::nullopt;
    CtcGradients g;
    g.loss = 0.0;
    g.grad_logits = Matrix::Zero(0, num_labels);
    g.grad_logp = Matrix::Zero(0, num_labels);
    return g;
  }

  std::vector<int> ext = ExtendWithBlanks(target, blank);
  const Matrix& logp = post.log_probs;
  Matrix alpha = ForwardPass(logp, ext);
  const int last = static_cast<int>(ext.size()) - 1;
  double log_total = alpha(num_frames - 1, last);
  if (last >= 1) log_total = LogAdd(log_total, alpha(num_frames - 1, last - 1));
  if (log_total == kLogZero) return std::nullopt;  // unreachable: skip

  Matrix beta = BackwardPass(logp, ext);

  // Occupancy gamma(t, k) = sum over states with label k of
  // exp(alpha + beta - emission - log_total); emission appears in both
  // alpha and beta, so one copy is divided back out.
  CtcGradients g;
  g.loss = -log_total;
  g.grad_logp = Matrix::Zero(num_frames, num_labels);
  for (int t = 0; t < num_frames; ++t) {
    for (int s = 0; s <= last; ++s) {
      double a = alpha(t, s);
      double b = beta(t, s);
      if (a == kLogZero || b == kLogZero) continue;
      g.grad_logp(t, ext[s]) -=
          std::exp(a + b - logp(t, ext[s]) - log_total);
    }
  }
  // d(-logP)/d logits = softmax(logits) - occupancy, via the log-softmax
  // Jacobian; rows sum to zero.
  g.grad_logits = Matrix(num_frames, num_labels);
  for (int t = 0; t < num_frames; ++t) {
    for (int k = 0; k < num_labels; ++k) {
      g.grad_logits(t, k) = std::exp(logp(t, k)) + g.grad_logp(t, k);
    }
  }
  return g;
}

LabelSequence BestPathDecode(const FramePosteriors& post,
                             const Vocabulary& vocab) {
  if (post.length() == 0) return {};
  if (post.num_labels() != vocab.num_labels()) {
    throw InputDomainError("posterior width does not match vocabulary");
  }
  Alignment best;
  best.frames.reserve(post.length());
  for (int t = 0; t < post.length(); ++t) {
    int arg = 0;
    for (int k = 1; k < post.num_labels(); ++k) {
      if (post.log_probs(t, k) > post.log_probs(t, arg)) arg = k;
    }
    best.frames.push_back(arg);
  }
  return Collapse(best, vocab);
}

}  // namespace ctclab

// nn/encoder.cc

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

#include "nn/encoder.h"

#include <cmath>

#include "base/error.h"

namespace ctclab::nn {

int NormKind::EffectiveGroups(int d_model) const {
  switch (kind) {
    case kBatch:
      throw InternalError("batch norm has no group view");
    case kGroup:
      return num_groups;
    case kInstance:
      return d_model;
    case kLayer:
      return 1;
  }
  throw InternalError("unknown norm kind");
}

std::string NormKind::Name() const {
  switch (kind) {
    case kBatch:
      return "batch";
    case kGroup:
      return "group";
    case kInstance:
      return "instance";
    case kLayer:
      return "layer";
  }
  throw InternalError("unknown norm kind");
}

NormKind NormKind::FromName(const std::string& name, int num_groups) {
  if (name == "batch") return Batch();
  if (name == "group") return Group(num_groups);
  if (name == "instance") return Instance();
  if (name == "layer") return Layer();
  throw ConfigError("unknown norm kind: " + name);
}

void EncoderConfig::Validate() const {
  if (num_blocks < 1 || d_model < 1 || num_heads < 1 || d_ff < 1 ||
      conv_kernel < 1 || subsample_factor < 1 || feature_dim < 1 ||
      vocab_size_with_blank < 2) {
    throw ConfigError("encoder config fields must be positive");
  }
  if (d_model % num_heads != 0) {
    throw ConfigError("num_heads must divide d_model");
  }
  if (conv_kernel % 2 == 0) throw ConfigError("conv_kernel must be odd");
  if (norm_kind.kind == NormKind::kGroup &&
      (norm_kind.num_groups < 1 || d_model % norm_kind.num_groups != 0)) {
    throw ConfigError("norm num_groups must divide d_model");
  }
}

namespace {

Matrix RandnMatrix(int rows, int cols, double stddev, Rng& rng) {
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

std::string BlockPrefix(int b) { return "block" + std::to_string(b); }

void AddAffineNorm(ParameterSet& p, const std::string& prefix, int dim) {
  p.Add(prefix + ".gain", Matrix::Ones(1, dim));
  p.Add(prefix + ".bias", Matrix::Zero(1, dim));
}

void AddLinear(ParameterSet& p, const std::string& prefix, int in, int out,
               Rng& rng) {
  p.Add(prefix + ".w", RandnMatrix(in, out, 1.0 / std::sqrt(in), rng));
  p.Add(prefix + ".b", Matrix::Zero(1, out));
}

}  // namespace

ParameterSet InitEncoderParameters(const EncoderConfig& cfg, uint64_t seed) {
  cfg.Validate();
  Rng rng = MakeRng(DeriveSeed(seed, "encoder-init"));
  ParameterSet p;
  const int d = cfg.d_model;
  AddLinear(p, "input.proj", cfg.feature_dim * cfg.subsample_factor, d, rng);
  for (int b = 0; b < cfg.num_blocks; ++b) {
    const std::string bp = BlockPrefix(b);
    AddAffineNorm(p, bp + ".ff1.norm", d);
    AddLinear(p, bp + ".ff1.lin1", d, cfg.d_ff, rng);
    AddLinear(p, bp + ".ff1.lin2", cfg.d_ff, d, rng);
    AddAffineNorm(p, bp + ".attn.norm", d);
    AddLinear(p, bp + ".attn.q", d, d, rng);
    AddLinear(p, bp + ".attn.k", d, d, rng);
    AddLinear(p, bp + ".attn.v", d, d, rng);
    AddLinear(p, bp + ".attn.out", d, d, rng);
    p.Add(bp + ".attn.rel_bias",
          Matrix::Zero(cfg.num_heads, 2 * kRelPosWindow + 1));
    AddAffineNorm(p, bp + ".conv.norm", d);
    AddLinear(p, bp + ".conv.pw1", d, 2 * d, rng);
    p.Add(bp + ".conv.dw.w",
          RandnMatrix(cfg.conv_kernel, d, 1.0 / std::sqrt(cfg.conv_kernel),
                      rng));
    AddAffineNorm(p, bp + ".conv.innorm", d);
    if (cfg.norm_kind.UsesRunningStats()) {
      p.Add(bp + ".conv.innorm.running_mean", Matrix::Zero(1, d),
            /*trainable=*/false);
      p.Add(bp + ".conv.innorm.running_var", Matrix::Ones(1, d),
            /*trainable=*/false);
    }
    AddLinear(p, bp + ".conv.pw2", d, d, rng);
    AddAffineNorm(p, bp + ".ff2.norm", d);
    AddLinear(p, bp + ".ff2.lin1", d, cfg.d_ff, rng);
    AddLinear(p, bp + ".ff2.lin2", cfg.d_ff, d, rng);
    AddAffineNorm(p, bp + ".final_norm", d);
  }
  AddLinear(p, "output.proj", d, cfg.vocab_size_with_blank, rng);
  return p;
}

namespace {

// Stacks subsample_factor consecutive frames per output row, zero-padding
// past the end, so T' = ceil(T / factor).
Matrix StackFrames(const Matrix& features, int factor) {
  const int frames = static_cast<int>(features.rows());
  const int dim = static_cast<int>(features.cols());
  const int out_frames = (frames + factor - 1) / factor;
  Matrix out = Matrix::Zero(out_frames, dim * factor);
  for (int t = 0; t < out_frames; ++t) {
    for (int s = 0; s < factor; ++s) {
      int src = t * factor + s;
      if (src >= frames) break;
      out.block(t, s * dim, 1, dim) = features.row(src);
    }
  }
  return out;
}

// Binds parameter entries to tape leaves, recording the mapping so the
// backward pass can gather per-entry gradients.
class ParamBinder {
 public:
  ParamBinder(const ParameterSet& params, Tape& tape,
              std::vector<std::pair<int, Var>>& bound)
      : params_(params), tape_(tape), bound_(bound) {}

  Var operator()(const std::string& name, int rows, int cols) {
    int idx = params_.Find(name);
    if (idx < 0) throw ConfigError("missing parameter entry: " + name);
    const Matrix& v = params_.value(idx);
    if (v.rows() != rows || v.cols() != cols) {
      throw ConfigError("parameter shape mismatch for " + name);
    }
    Var var = tape_.Leaf(v);
    bound_.push_back({idx, var});
    return var;
  }

  const Matrix& Raw(const std::string& name, int* index_out) const {
    int idx = params_.Find(name);
    if (idx < 0) throw ConfigError("missing parameter entry: " + name);
    if (index_out != nullptr) *index_out = idx;
    return params_.value(idx);
  }

 private:
  const ParameterSet& params_;
  Tape& tape_;
  std::vector<std::pair<int, Var>>& bound_;
};

}  // namespace

EncoderForwardResult EncoderForward(const ParameterSet& params,
                                    const EncoderConfig& cfg,
                                    const FeatureSequence& features, Mode mode,
                                    Rng* /*rng: reserved*/) {
  cfg.Validate();
  if (features.length() > 0 && features.dim() != cfg.feature_dim) {
    throw ConfigError("feature dim " + std::to_string(features.dim()) +
                      " does not match config feature_dim " +
                      std::to_string(cfg.feature_dim));
  }

  EncoderForwardResult res;
  res.source_ = &params;
  res.source_version_ = params.version();
  Tape& tape = res.tape_;
  ParamBinder P(params, tape, res.param_vars_);

  const int d = cfg.d_model;
  const int dh = d / cfg.num_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  Var h = tape.Constant(StackFrames(features.frames, cfg.subsample_factor));
  const int out_frames = static_cast<int>(tape.value(h).rows());
  h = tape.AddRowVector(
      tape.MatMul(h, P("input.proj.w", cfg.feature_dim * cfg.subsample_factor,
                       d)),
      P("input.proj.b", 1, d));

  auto feed_forward = [&](Var x, const std::string& prefix) {
    Var n = tape.LayerNormRows(x, P(prefix + ".norm.gain", 1, d),
                               P(prefix + ".norm.bias", 1, d), kNormEpsilon);
    Var u = tape.AddRowVector(
        tape.MatMul(n, P(prefix + ".lin1.w", d, cfg.d_ff)),
        P(prefix + ".lin1.b", 1, cfg.d_ff));
    u = tape.Swish(u);
    return tape.AddRowVector(
        tape.MatMul(u, P(prefix + ".lin2.w", cfg.d_ff, d)),
        P(prefix + ".lin2.b", 1, d));
  };

  for (int b = 0; b < cfg.num_blocks; ++b) {
    const std::string bp = BlockPrefix(b);

    // Macaron half-step feed-forward.
    h = tape.Add(h, tape.Scale(feed_forward(h, bp + ".ff1"), 0.5));

    // Multi-head self-attention with clipped relative position bias.
    {
      Var n = tape.LayerNormRows(h, P(bp + ".attn.norm.gain", 1, d),
                                 P(bp + ".attn.norm.bias", 1, d),
                                 kNormEpsilon);
      Var q = tape.AddRowVector(tape.MatMul(n, P(bp + ".attn.q.w", d, d)),
                                P(bp + ".attn.q.b", 1, d));
      Var k = tape.AddRowVector(tape.MatMul(n, P(bp + ".attn.k.w", d, d)),
                                P(bp + ".attn.k.b", 1, d));
      Var v = tape.AddRowVector(tape.MatMul(n, P(bp + ".attn.v.w", d, d)),
                                P(bp + ".attn.v.b", 1, d));
      Var rel = P(bp + ".attn.rel_bias", cfg.num_heads, 2 * kRelPosWindow + 1);
      std::vector<Var> heads;
      for (int head = 0; head < cfg.num_heads; ++head) {
        Var qh = tape.SliceCols(q, head * dh, dh);
        Var kh = tape.SliceCols(k, head * dh, dh);
        Var vh = tape.SliceCols(v, head * dh, dh);
        Var scores = tape.Scale(tape.MatMulNT(qh, kh), scale);
        scores = tape.AddRelPosBias(scores, tape.SliceRows(rel, head, 1),
                                    kRelPosWindow);
        Var attn = tape.SoftmaxRows(scores);
        heads.push_back(tape.MatMul(attn, vh));
      }
      Var concat = tape.ConcatCols(heads);
      Var out = tape.AddRowVector(
          tape.MatMul(concat, P(bp + ".attn.out.w", d, d)),
          P(bp + ".attn.out.b", 1, d));
      h = tape.Add(h, out);
    }

    // Convolution module: pointwise, GLU, depthwise, norm under test,
    // swish, pointwise.
    {
      Var n = tape.LayerNormRows(h, P(bp + ".conv.norm.gain", 1, d),
                                 P(bp + ".conv.norm.bias", 1, d),
                                 kNormEpsilon);
      Var u = tape.AddRowVector(
          tape.MatMul(n, P(bp + ".conv.pw1.w", d, 2 * d)),
          P(bp + ".conv.pw1.b", 1, 2 * d));
      Var gate = tape.CwiseMul(tape.SliceCols(u, 0, d),
                               tape.Sigmoid(tape.SliceCols(u, d, d)));
      Var conv = tape.DepthwiseConvTime(
          gate, P(bp + ".conv.dw.w", cfg.conv_kernel, d));

      Var gain = P(bp + ".conv.innorm.gain", 1, d);
      Var bias = P(bp + ".conv.innorm.bias", 1, d);
      Var normed;
      if (cfg.norm_kind.UsesRunningStats()) {
        int mean_idx = -1, var_idx = -1;
        const Matrix& rm = P.Raw(bp + ".conv.innorm.running_mean", &mean_idx);
        const Matrix& rv = P.Raw(bp + ".conv.innorm.running_var", &var_idx);
        if (mode == Mode::kTrain) {
          Matrix batch_mean, batch_var;
          normed = tape.BatchNormTrain(conv, gain, bias, kNormEpsilon,
                                       &batch_mean, &batch_var);
          if (out_frames > 0) {
            res.stat_updates_.push_back(
                {mean_idx, kBnStatMomentum * rm +
                               (1.0 - kBnStatMomentum) * batch_mean});
            res.stat_updates_.push_back(
                {var_idx,
                 kBnStatMomentum * rv + (1.0 - kBnStatMomentum) * batch_var});
          }
        } else {
          normed = tape.BatchNormEval(conv, gain, bias, rm, rv, kNormEpsilon);
        }
      } else {
        normed = tape.GroupNormTC(conv, cfg.norm_kind.EffectiveGroups(d), gain,
                                  bias, kNormEpsilon);
      }
      Var act = tape.Swish(normed);
      Var out = tape.AddRowVector(
          tape.MatMul(act, P(bp + ".conv.pw2.w", d, d)),
          P(bp + ".conv.pw2.b", 1, d));
      h = tape.Add(h, out);
    }

    h = tape.Add(h, tape.Scale(feed_forward(h, bp + ".ff2"), 0.5));

    h = tape.LayerNormRows(h, P(bp + ".final_norm.gain", 1, d),
                           P(bp + ".final_norm.bias", 1, d), kNormEpsilon);
  }

  Var logits = tape.AddRowVector(
      tape.MatMul(h, P("output.proj.w", d, cfg.vocab_size_with_blank)),
      P("output.proj.b", 1, cfg.vocab_size_with_blank));
  res.posterior_var_ = tape.LogSoftmaxRows(logits);
  res.posteriors_ = FramePosteriors{tape.value(res.posterior_var_)};
  return res;
}

ParameterSet EncoderBackward(EncoderForwardResult& fwd,
                             const Matrix& posterior_grad) {
  if (fwd.source_ == nullptr) {
    throw InternalError("backward on a moved-from forward result");
  }
  if (fwd.source_->version() != fwd.source_version_) {
    throw InternalError(
        "stale activation tape: parameters changed since the forward pass");
  }
  fwd.tape_.Backward(fwd.posterior_var_, posterior_grad);
  ParameterSet grad = fwd.source_->ZerosLike();
  for (const auto& [entry, var] : fwd.param_vars_) {
    grad.mutable_value(entry) = fwd.tape_.grad(var);
  }
  return grad;
}

void ApplyStatUpdates(const EncoderForwardResult& fwd, ParameterSet* params) {
  for (const auto& u : fwd.stat_updates()) {
    params->mutable_value(u.entry_index) = u.new_value;
  }
}

}  // namespace ctclab::nn

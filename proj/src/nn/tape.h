// nn/tape.h

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

#ifndef CTCLAB_NN_TAPE_H_
#define CTCLAB_NN_TAPE_H_

#include <functional>
#include <vector>

#include "base/sequence.h"

namespace ctclab::nn {

// Define-by-run reverse-mode differentiation over double matrices.
// Activations are rows = time frames, columns = channels.  The tape is
// rebuilt every forward pass; nodes are created in topological order, so
// Backward is a single reverse sweep that accumulates into input grads.

class Tape;

struct Var {
  int index = -1;
};

class Tape {
 public:
  // Input that never receives gradient (features, masks).
  Var Constant(Matrix value);
  // Differentiable input (a parameter view).
  Var Leaf(Matrix value);

  Var MatMul(Var a, Var b);
  // y = a * b^T (used for attention scores).
  Var MatMulNT(Var a, Var b);
  Var Add(Var a, Var b);
  Var Scale(Var a, double c);
  Var CwiseMul(Var a, Var b);
  // y = x + broadcast of a 1 x C row vector.
  Var AddRowVector(Var x, Var row);
  Var Sigmoid(Var x);
  // x * sigmoid(x).
  Var Swish(Var x);
  Var SliceCols(Var x, int start, int count);
  Var SliceRows(Var x, int start, int count);
  Var ConcatCols(const std::vector<Var>& parts);
  Var SoftmaxRows(Var x);
  Var LogSoftmaxRows(Var x);
  // Per-row standardization over channels with per-channel affine;
  // gain/bias are 1 x C leaves.
  Var LayerNormRows(Var x, Var gain, Var bias, double epsilon);
  // Group standardization over (all rows) x (channel group); matches
  // GroupNorm() on the transposed layout.
  Var GroupNormTC(Var x, int num_groups, Var gain, Var bias, double epsilon);
  // Batch normalization over the time rows of this sequence (train mode);
  // exports the batch statistics for the running-stat update.
  Var BatchNormTrain(Var x, Var gain, Var bias, double epsilon,
                     Matrix* batch_mean, Matrix* batch_var);
  // Eval-mode batch normalization against fixed running statistics.
  Var BatchNormEval(Var x, Var gain, Var bias, const Matrix& running_mean,
                    const Matrix& running_var, double epsilon);
  // Depthwise 1-D convolution along time with same zero padding;
  // weights are K x C, kernel size K odd.
  Var DepthwiseConvTime(Var x, Var weights);
  // scores(i, j) += bias(0, clip(j - i, -window, window) + window).
  Var AddRelPosBias(Var scores, Var bias, int window);

  void Backward(Var output, const Matrix& output_grad);

  const Matrix& value(Var v) const { return nodes_[v.index].value; }
  const Matrix& grad(Var v) const { return nodes_[v.index].grad; }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool needs_grad = false;
    std::vector<int> inputs;
    std::function<void(Tape&, int)> backprop;  // (tape, self index)
  };

  Var Emplace(Matrix value, std::vector<int> inputs,
              std::function<void(Tape&, int)> backprop);
  bool AnyNeedsGrad(const std::vector<int>& inputs) const;

  Matrix& grad_ref(int i) { return nodes_[i].grad; }

  std::vector<Node> nodes_;
};

}  // namespace ctclab::nn

#endif  // CTCLAB_NN_TAPE_H_

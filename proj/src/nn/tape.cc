// nn/tape.cc

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

#include "nn/tape.h"

#include <cmath>

#include "base/error.h"

namespace ctclab::nn {

namespace {

void CheckSameShape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ConfigError(std::string(op) + ": shape mismatch");
  }
}

// y(r, c) = xhat(r, c) * gain(0, c) + bias(0, c)
Matrix AffinePerChannel(const Matrix& xhat, const Matrix& gain,
                        const Matrix& bias) {
  Matrix y(xhat.rows(), xhat.cols());
  for (Eigen::Index c = 0; c < xhat.cols(); ++c) {
    y.col(c) = xhat.col(c).array() * gain(0, c) + bias(0, c);
  }
  return y;
}

}  // namespace

Var Tape::Emplace(Matrix value, std::vector<int> inputs,
                  std::function<void(Tape&, int)> backprop) {
  Node n;
  n.value = std::move(value);
  n.inputs = std::move(inputs);
  n.needs_grad = AnyNeedsGrad(n.inputs);
  if (n.needs_grad) n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

bool Tape::AnyNeedsGrad(const std::vector<int>& inputs) const {
  for (int i : inputs) {
    if (nodes_[i].needs_grad) return true;
  }
  return false;
}

Var Tape::Constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::Leaf(Matrix value) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = true;
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::MatMul(Var a, Var b) {
  if (nodes_[a.index].value.cols() != nodes_[b.index].value.rows()) {
    throw ConfigError("matmul: inner dimensions differ");
  }
  Matrix y = nodes_[a.index].value * nodes_[b.index].value;
  return Emplace(std::move(y), {a.index, b.index}, [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    const Matrix& g = n.grad;
    int ia = n.inputs[0], ib = n.inputs[1];
    if (t.nodes_[ia].needs_grad) {
      t.grad_ref(ia).noalias() += g * t.nodes_[ib].value.transpose();
    }
    if (t.nodes_[ib].needs_grad) {
      t.grad_ref(ib).noalias() += t.nodes_[ia].value.transpose() * g;
    }
  });
}

Var Tape::MatMulNT(Var a, Var b) {
  if (nodes_[a.index].value.cols() != nodes_[b.index].value.cols()) {
    throw ConfigError("matmul_nt: inner dimensions differ");
  }
  Matrix y = nodes_[a.index].value * nodes_[b.index].value.transpose();
  return Emplace(std::move(y), {a.index, b.index}, [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    const Matrix& g = n.grad;
    int ia = n.inputs[0], ib = n.inputs[1];
    if (t.nodes_[ia].needs_grad) {
      t.grad_ref(ia).noalias() += g * t.nodes_[ib].value;
    }
    if (t.nodes_[ib].needs_grad) {
      t.grad_ref(ib).noalias() += g.transpose() * t.nodes_[ia].value;
    }
  });
}

Var Tape::Add(Var a, Var b) {
  CheckSameShape(nodes_[a.index].value, nodes_[b.index].value, "add");
  Matrix y = nodes_[a.index].value + nodes_[b.index].value;
  return Emplace(std::move(y), {a.index, b.index}, [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    for (int i : n.inputs) {
      if (t.nodes_[i].needs_grad) t.grad_ref(i) += n.grad;
    }
  });
}

Var Tape::Scale(Var a, double c) {
  Matrix y = c * nodes_[a.index].value;
  return Emplace(std::move(y), {a.index}, [c](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    if (t.nodes_[n.inputs[0]].needs_grad) {
      t.grad_ref(n.inputs[0]) += c * n.grad;
    }
  });
}

Var Tape::CwiseMul(Var a, Var b) {
  CheckSameShape(nodes_[a.index].value, nodes_[b.index].value, "cwise_mul");
  Matrix y = nodes_[a.index].value.cwiseProduct(nodes_[b.index].value);
  return Emplace(std::move(y), {a.index, b.index}, [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    int ia = n.inputs[0], ib = n.inputs[1];
    if (t.nodes_[ia].needs_grad) {
      t.grad_ref(ia) += n.grad.cwiseProduct(t.nodes_[ib].value);
    }
    if (t.nodes_[ib].needs_grad) {
      t.grad_ref(ib) += n.grad.cwiseProduct(t.nodes_[ia].value);
    }
  });
}

Var Tape::AddRowVector(Var x, Var row) {
  const Matrix& xv = nodes_[x.index].value;
  const Matrix& rv = nodes_[row.index].value;
  if (rv.rows() != 1 || rv.cols() != xv.cols()) {
    throw ConfigError("add_row_vector: row must be 1 x cols(x)");
  }
  Matrix y = xv.rowwise() + rv.row(0);
  return Emplace(std::move(y), {x.index, row.index}, [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    int ix = n.inputs[0], ir = n.inputs[1];
    if (t.nodes_[ix].needs_grad) t.grad_ref(ix) += n.grad;
    if (t.nodes_[ir].needs_grad) {
      t.grad_ref(ir).row(0) += n.grad.colwise().sum();
    }
  });
}

Var Tape::Sigmoid(Var x) {
  Matrix y = nodes_[x.index].value.unaryExpr(
      [](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  return Emplace(std::move(y), {x.index}, [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    if (!t.nodes_[n.inputs[0]].needs_grad) return;
    const Matrix& y = n.value;
    t.grad_ref(n.inputs[0]).array() +=
        n.grad.array() * y.array() * (1.0 - y.array());
  });
}

Var Tape::Swish(Var x) {
  const Matrix& xv = nodes_[x.index].value;
  Matrix sig =
      xv.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  Matrix y = xv.cwiseProduct(sig);
  return Emplace(std::move(y), {x.index},
                 [sig = std::move(sig)](Tape& t, int self) {
                   const auto& n = t.nodes_[self];
                   if (!t.nodes_[n.inputs[0]].needs_grad) return;
                   const Matrix& xv = t.nodes_[n.inputs[0]].value;
                   t.grad_ref(n.inputs[0]).array() +=
                       n.grad.array() *
                       (sig.array() +
                        xv.array() * sig.array() * (1.0 - sig.array()));
                 });
}

Var Tape::SliceCols(Var x, int start, int count) {
  Matrix y = nodes_[x.index].value.middleCols(start, count);
  return Emplace(std::move(y), {x.index}, [start, count](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    if (!t.nodes_[n.inputs[0]].needs_grad) return;
    t.grad_ref(n.inputs[0]).middleCols(start, count) += n.grad;
  });
}

Var Tape::SliceRows(Var x, int start, int count) {
  Matrix y = nodes_[x.index].value.middleRows(start, count);
  return Emplace(std::move(y), {x.index}, [start, count](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    if (!t.nodes_[n.inputs[0]].needs_grad) return;
    t.grad_ref(n.inputs[0]).middleRows(start, count) += n.grad;
  });
}

Var Tape::ConcatCols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ConfigError("concat_cols: empty part list");
  Eigen::Index rows = nodes_[parts[0].index].value.rows();
  Eigen::Index cols = 0;
  std::vector<int> inputs;
  for (Var p : parts) {
    if (nodes_[p.index].value.rows() != rows) {
      throw ConfigError("concat_cols: row counts differ");
    }
    cols += nodes_[p.index].value.cols();
    inputs.push_back(p.index);
  }
  Matrix y(rows, cols);
  Eigen::Index at = 0;
  for (Var p : parts) {
    const Matrix& v = nodes_[p.index].value;
    y.middleCols(at, v.cols()) = v;
    at += v.cols();
  }
  return Emplace(std::move(y), std::move(inputs), [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    Eigen::Index at = 0;
    for (int i : n.inputs) {
      Eigen::Index w = t.nodes_[i].value.cols();
      if (t.nodes_[i].needs_grad) {
        t.grad_ref(i) += n.grad.middleCols(at, w);
      }
      at += w;
    }
  });
}

Var Tape::SoftmaxRows(Var x) {
  const Matrix& xv = nodes_[x.index].value;
  Matrix y(xv.rows(), xv.cols());
  for (Eigen::Index r = 0; r < xv.rows(); ++r) {
    double mx = xv.cols() > 0 ? xv.row(r).maxCoeff() : 0.0;
    Eigen::RowVectorXd e = (xv.row(r).array() - mx).exp();
    y.row(r) = e / e.sum();
  }
  return Emplace(std::move(y), {x.index}, [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    if (!t.nodes_[n.inputs[0]].needs_grad) return;
    Matrix& gx = t.grad_ref(n.inputs[0]);
    for (Eigen::Index r = 0; r < n.value.rows(); ++r) {
      double dot = n.grad.row(r).dot(n.value.row(r));
      gx.row(r).array() +=
          n.value.row(r).array() * (n.grad.row(r).array() - dot);
    }
  });
}

Var Tape::LogSoftmaxRows(Var x) {
  const Matrix& xv = nodes_[x.index].value;
  Matrix y(xv.rows(), xv.cols());
  for (Eigen::Index r = 0; r < xv.rows(); ++r) {
    double mx = xv.cols() > 0 ? xv.row(r).maxCoeff() : 0.0;
    double lse = mx + std::log((xv.row(r).array() - mx).exp().sum());
    y.row(r) = xv.row(r).array() - lse;
  }
  return Emplace(std::move(y), {x.index}, [](Tape& t, int self) {
    const auto& n = t.nodes_[self];
    if (!t.nodes_[n.inputs[0]].needs_grad) return;
    Matrix& gx = t.grad_ref(n.inputs[0]);
    for (Eigen::Index r = 0; r < n.value.rows(); ++r) {
      double gsum = n.grad.row(r).sum();
      gx.row(r).array() +=
          n.grad.row(r).array() - n.value.row(r).array().exp() * gsum;
    }
  });
}

Var Tape::LayerNormRows(Var x, Var gain, Var bias, double epsilon) {
  const Matrix& xv = nodes_[x.index].value;
  const Matrix& gv = nodes_[gain.index].value;
  const Matrix& bv = nodes_[bias.index].value;
  if (gv.rows() != 1 || gv.cols() != xv.cols() || bv.rows() != 1 ||
      bv.cols() != xv.cols()) {
    throw ConfigError("layer_norm: gain/bias must be 1 x cols(x)");
  }
  Matrix xhat(xv.rows(), xv.cols());
  Vector inv_std(xv.rows());
  for (Eigen::Index r = 0; r < xv.rows(); ++r) {
    double mean = xv.row(r).mean();
    double var = (xv.row(r).array() - mean).square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + epsilon);
    xhat.row(r) = (xv.row(r).array() - mean) * inv_std(r);
  }
  Matrix y = AffinePerChannel(xhat, gv, bv);
  return Emplace(
      std::move(y), {x.index, gain.index, bias.index},
      [xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t,
                                                             int self) {
        const auto& n = t.nodes_[self];
        int ix = n.inputs[0], ig = n.inputs[1], ib = n.inputs[2];
        const Matrix& g = n.grad;
        const Matrix& gv = t.nodes_[ig].value;
        if (t.nodes_[ib].needs_grad) {
          t.grad_ref(ib).row(0) += g.colwise().sum();
        }
        if (t.nodes_[ig].needs_grad) {
          t.grad_ref(ig).row(0) += g.cwiseProduct(xhat).colwise().sum();
        }
        if (t.nodes_[ix].needs_grad) {
          Matrix& gx = t.grad_ref(ix);
          const Eigen::Index cols = g.cols();
          for (Eigen::Index r = 0; r < g.rows(); ++r) {
            double m1 = 0.0, m2 = 0.0;
            for (Eigen::Index c = 0; c < cols; ++c) {
              double dxhat = g(r, c) * gv(0, c);
              m1 += dxhat;
              m2 += dxhat * xhat(r, c);
            }
            m1 /= cols;
            m2 /= cols;
            for (Eigen::Index c = 0; c < cols; ++c) {
              double dxhat = g(r, c) * gv(0, c);
              gx(r, c) += inv_std(r) * (dxhat - m1 - xhat(r, c) * m2);
            }
          }
        }
      });
}

Var Tape::GroupNormTC(Var x, int num_groups, Var gain, Var bias,
                      double epsilon) {
  const Matrix& xv = nodes_[x.index].value;
  const Matrix& gv = nodes_[gain.index].value;
  const Matrix& bv = nodes_[bias.index].value;
  const Eigen::Index channels = xv.cols();
  if (num_groups < 1 || channels % num_groups != 0) {
    throw ConfigError("group_norm: num_groups must divide channels");
  }
  if (gv.rows() != 1 || gv.cols() != channels || bv.rows() != 1 ||
      bv.cols() != channels) {
    throw ConfigError("group_norm: gain/bias must be 1 x channels");
  }
  const Eigen::Index group_size = channels / num_groups;
  Matrix xhat = Matrix::Zero(xv.rows(), channels);
  Vector inv_std = Vector::Ones(num_groups);
  if (xv.rows() > 0) {
    for (int g = 0; g < num_groups; ++g) {
      auto block = xv.middleCols(g * group_size, group_size);
      double mean = block.mean();
      double var = (block.array() - mean).square().mean();
      inv_std(g) = 1.0 / std::sqrt(var + epsilon);
      xhat.middleCols(g * group_size, group_size) =
          (block.array() - mean) * inv_std(g);
    }
  }
  Matrix y = AffinePerChannel(xhat, gv, bv);
  return Emplace(
      std::move(y), {x.index, gain.index, bias.index},
      [xhat = std::move(xhat), inv_std = std::move(inv_std), num_groups,
       group_size](Tape& t, int self) {
        const auto& n = t.nodes_[self];
        int ix = n.inputs[0], ig = n.inputs[1], ib = n.inputs[2];
        const Matrix& g = n.grad;
        const Matrix& gv = t.nodes_[ig].value;
        if (t.nodes_[ib].needs_grad) {
          t.grad_ref(ib).row(0) += g.colwise().sum();
        }
        if (t.nodes_[ig].needs_grad) {
          t.grad_ref(ig).row(0) += g.cwiseProduct(xhat).colwise().sum();
        }
        if (t.nodes_[ix].needs_grad && g.rows() > 0) {
          Matrix& gx = t.grad_ref(ix);
          const double count =
              static_cast<double>(g.rows()) * static_cast<double>(group_size);
          for (int grp = 0; grp < num_groups; ++grp) {
            const Eigen::Index c0 = grp * group_size;
            double m1 = 0.0, m2 = 0.0;
            for (Eigen::Index r = 0; r < g.rows(); ++r) {
              for (Eigen::Index c = c0; c < c0 + group_size; ++c) {
                double dxhat = g(r, c) * gv(0, c);
                m1 += dxhat;
                m2 += dxhat * xhat(r, c);
              }
            }
            m1 /= count;
            m2 /= count;
            for (Eigen::Index r = 0; r < g.rows(); ++r) {
              for (Eigen::Index c = c0; c < c0 + group_size; ++c) {
                double dxhat = g(r, c) * gv(0, c);
                gx(r, c) += inv_std(grp) * (dxhat - m1 - xhat(r, c) * m2);
              }
            }
          }
        }
      });
}

Var Tape::BatchNormTrain(Var x, Var gain, Var bias, double epsilon,
                         Matrix* batch_mean, Matrix* batch_var) {
  const Matrix& xv = nodes_[x.index].value;
  const Matrix& gv = nodes_[gain.index].value;
  const Matrix& bv = nodes_[bias.index].value;
  const Eigen::Index channels = xv.cols();
  if (gv.cols() != channels || bv.cols() != channels) {
    throw ConfigError("batch_norm: gain/bias must be 1 x channels");
  }
  Matrix mean = Matrix::Zero(1, channels);
  Matrix var = Matrix::Ones(1, channels);
  Matrix xhat = Matrix::Zero(xv.rows(), channels);
  Vector inv_std = Vector::Ones(channels);
  if (xv.rows() > 0) {
    mean = xv.colwise().mean();
    for (Eigen::Index c = 0; c < channels; ++c) {
      var(0, c) = (xv.col(c).array() - mean(0, c)).square().mean();
      inv_std(c) = 1.0 / std::sqrt(var(0, c) + epsilon);
      xhat.col(c) = (xv.col(c).array() - mean(0, c)) * inv_std(c);
    }
  }
  *batch_mean = mean;
  *batch_var = var;
  Matrix y = AffinePerChannel(xhat, gv, bv);
  return Emplace(
      std::move(y), {x.index, gain.index, bias.index},
      [xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t,
                                                             int self) {
        const auto& n = t.nodes_[self];
        int ix = n.inputs[0], ig = n.inputs[1], ib = n.inputs[2];
        const Matrix& g = n.grad;
        const Matrix& gv = t.nodes_[ig].value;
        if (t.nodes_[ib].needs_grad) {
          t.grad_ref(ib).row(0) += g.colwise().sum();
        }
        if (t.nodes_[ig].needs_grad) {
          t.grad_ref(ig).row(0) += g.cwiseProduct(xhat).colwise().sum();
        }
        if (t.nodes_[ix].needs_grad && g.rows() > 0) {
          Matrix& gx = t.grad_ref(ix);
          const double rows = static_cast<double>(g.rows());
          for (Eigen::Index c = 0; c < g.cols(); ++c) {
            double m1 = 0.0, m2 = 0.0;
            for (Eigen::Index r = 0; r < g.rows(); ++r) {
              double dxhat = g(r, c) * gv(0, c);
              m1 += dxhat;
              m2 += dxhat * xhat(r, c);
            }
            m1 /= rows;
            m2 /= rows;
            for (Eigen::Index r = 0; r < g.rows(); ++r) {
              double dxhat = g(r, c) * gv(0, c);
              gx(r, c) += inv_std(c) * (dxhat - m1 - xhat(r, c) * m2);
            }
          }
        }
      });
}

Var Tape::BatchNormEval(Var x, Var gain, Var bias, const Matrix& running_mean,
                        const Matrix& running_var, double epsilon) {
  const Matrix& xv = nodes_[x.index].value;
  const Matrix& gv = nodes_[gain.index].value;
  const Eigen::Index channels = xv.cols();
  if (running_mean.cols() != channels || running_var.cols() != channels) {
    throw ConfigError("batch_norm: running stats must be 1 x channels");
  }
  Vector inv_std(channels);
  for (Eigen::Index c = 0; c < channels; ++c) {
    inv_std(c) = 1.0 / std::sqrt(running_var(0, c) + epsilon);
  }
  Matrix xhat(xv.rows(), channels);
  for (Eigen::Index c = 0; c < channels; ++c) {
    xhat.col(c) = (xv.col(c).array() - running_mean(0, c)) * inv_std(c);
  }
  Matrix y = AffinePerChannel(xhat, gv, nodes_[bias.index].value);
  return Emplace(
      std::move(y), {x.index, gain.index, bias.index},
      [xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t,
                                                             int self) {
        const auto& n = t.nodes_[self];
        int ix = n.inputs[0], ig = n.inputs[1], ib = n.inputs[2];
        const Matrix& g = n.grad;
        const Matrix& gv = t.nodes_[ig].value;
        if (t.nodes_[ib].needs_grad) {
          t.grad_ref(ib).row(0) += g.colwise().sum();
        }
        if (t.nodes_[ig].needs_grad) {
          t.grad_ref(ig).row(0) += g.cwiseProduct(xhat).colwise().sum();
        }
        if (t.nodes_[ix].needs_grad) {
          Matrix& gx = t.grad_ref(ix);
          for (Eigen::Index c = 0; c < g.cols(); ++c) {
            gx.col(c).array() += g.col(c).array() * gv(0, c) * inv_std(c);
          }
        }
      });
}

Var Tape::DepthwiseConvTime(Var x, Var weights) {
  const Matrix& xv = nodes_[x.index].value;
  const Matrix& wv = nodes_[weights.index].value;
  const Eigen::Index kernel = wv.rows();
  const Eigen::Index channels = xv.cols();
  if (wv.cols() != channels) {
    throw ConfigError("depthwise_conv: weights must be K x channels");
  }
  if (kernel % 2 == 0) throw ConfigError("depthwise_conv: kernel must be odd");
  const Eigen::Index pad = (kernel - 1) / 2;
  const Eigen::Index frames = xv.rows();
  Matrix y = Matrix::Zero(frames, channels);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (Eigen::Index k = 0; k < kernel; ++k) {
      Eigen::Index src = t + k - pad;
      if (src < 0 || src >= frames) continue;
      y.row(t).array() += xv.row(src).array() * wv.row(k).array();
    }
  }
  return Emplace(std::move(y), {x.index, weights.index},
                 [kernel, pad](Tape& t, int self) {
                   const auto& n = t.nodes_[self];
                   int ix = n.inputs[0], iw = n.inputs[1];
                   const Matrix& g = n.grad;
                   const Matrix& xv = t.nodes_[ix].value;
                   const Matrix& wv = t.nodes_[iw].value;
                   const Eigen::Index frames = xv.rows();
                   for (Eigen::Index tt = 0; tt < frames; ++tt) {
                     for (Eigen::Index k = 0; k < kernel; ++k) {
                       Eigen::Index src = tt + k - pad;
                       if (src < 0 || src >= frames) continue;
                       if (t.nodes_[ix].needs_grad) {
                         t.grad_ref(ix).row(src).array() +=
                             g.row(tt).array() * wv.row(k).array();
                       }
                       if (t.nodes_[iw].needs_grad) {
                         t.grad_ref(iw).row(k).array() +=
                             g.row(tt).array() * xv.row(src).array();
                       }
                     }
                   }
                 });
}

Var Tape::AddRelPosBias(Var scores, Var bias, int window) {
  const Matrix& sv = nodes_[scores.index].value;
  const Matrix& bv = nodes_[bias.index].value;
  if (sv.rows() != sv.cols()) {
    throw ConfigError("rel_pos_bias: scores must be square");
  }
  if (bv.rows() != 1 || bv.cols() != 2 * window + 1) {
    throw ConfigError("rel_pos_bias: bias must be 1 x (2*window+1)");
  }
  Matrix y = sv;
  for (Eigen::Index i = 0; i < sv.rows(); ++i) {
    for (Eigen::Index j = 0; j < sv.cols(); ++j) {
      int off = static_cast<int>(j - i);
      off = std::max(-window, std::min(window, off));
      y(i, j) += bv(0, off + window);
    }
  }
  return Emplace(std::move(y), {scores.index, bias.index},
                 [window](Tape& t, int self) {
                   const auto& n = t.nodes_[self];
                   int is = n.inputs[0], ib = n.inputs[1];
                   if (t.nodes_[is].needs_grad) t.grad_ref(is) += n.grad;
                   if (t.nodes_[ib].needs_grad) {
                     Matrix& gb = t.grad_ref(ib);
                     for (Eigen::Index i = 0; i < n.grad.rows(); ++i) {
                       for (Eigen::Index j = 0; j < n.grad.cols(); ++j) {
                         int off = static_cast<int>(j - i);
                         off = std::max(-window, std::min(window, off));
                         gb(0, off + window) += n.grad(i, j);
                       }
                     }
                   }
                 });
}

void Tape::Backward(Var output, const Matrix& output_grad) {
  if (output.index < 0 || output.index >= static_cast<int>(nodes_.size())) {
    throw InputDomainError("backward: invalid output var");
  }
  CheckSameShape(nodes_[output.index].value, output_grad, "backward");
  for (auto& n : nodes_) {
    if (n.needs_grad) {
      n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
    }
  }
  if (!nodes_[output.index].needs_grad) return;  // no parameters involved
  nodes_[output.index].grad = output_grad;
  for (int i = output.index; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.needs_grad && n.backprop) n.backprop(*this, i);
  }
}

}  // namespace ctclab::nn

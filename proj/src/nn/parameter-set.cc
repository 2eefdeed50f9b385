// nn/parameter-set.cc

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

#include "nn/parameter-set.h"

#include <cmath>

#include "base/error.h"

namespace ctclab::nn {

void ParameterSet::Add(std::string name, Matrix value, bool trainable) {
  if (Find(name) >= 0) {
    throw ConfigError("duplicate parameter entry: " + name);
  }
  entries_.push_back({std::move(name), std::move(value), trainable});
  ++version_;
}

int ParameterSet::Find(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return -1;
}

Matrix& ParameterSet::mutable_value(int i) {
  ++version_;
  return entries_[i].value;
}

bool ParameterSet::Compatible(const ParameterSet& a, const ParameterSet& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    const Entry& ea = a.entries_[i];
    const Entry& eb = b.entries_[i];
    if (ea.name != eb.name || ea.value.rows() != eb.value.rows() ||
        ea.value.cols() != eb.value.cols()) {
      return false;
    }
  }
  return true;
}

void ParameterSet::CheckCompatible(const ParameterSet& a,
                                   const ParameterSet& b) {
  if (!Compatible(a, b)) {
    throw InputDomainError(
        "parameter sets are incompatible (names, order, or shapes differ)");
  }
}

void ParameterSet::SetZero() {
  for (auto& e : entries_) e.value.setZero();
  ++version_;
}

void ParameterSet::Scale(double c) {
  for (auto& e : entries_) e.value *= c;
  ++version_;
}

void ParameterSet::AddScaled(const ParameterSet& other, double c) {
  CheckCompatible(*this, other);
  for (int i = 0; i < size(); ++i) {
    entries_[i].value += c * other.entries_[i].value;
  }
  ++version_;
}

ParameterSet ParameterSet::ZerosLike() const {
  ParameterSet out;
  for (const auto& e : entries_) {
    out.Add(e.name, Matrix::Zero(e.value.rows(), e.value.cols()), e.trainable);
  }
  return out;
}

double ParameterSet::TrainableNorm() const {
  double sq = 0.0;
  for (const auto& e : entries_) {
    if (e.trainable) sq += e.value.squaredNorm();
  }
  return std::sqrt(sq);
}

int64_t ParameterSet::NumValues() const {
  int64_t n = 0;
  for (const auto& e : entries_) n += e.value.size();
  return n;
}

namespace {

// Pairwise sum keeps the k-identical-checkpoints average bit-exact for
// power-of-two k and improves accumulation error generally.
ParameterSet PairwiseSum(std::span<const ParameterSet> sets) {
  if (sets.size() == 1) return sets[0];
  size_t half = sets.size() / 2;
  ParameterSet left = PairwiseSum(sets.subspan(0, half));
  ParameterSet right = PairwiseSum(sets.subspan(half));
  left.AddScaled(right, 1.0);
  return left;
}

}  // namespace

ParameterSet AverageCheckpoints(std::span<const ParameterSet> checkpoints) {
  if (checkpoints.empty()) {
    throw InputDomainError("cannot average an empty checkpoint list");
  }
  for (size_t i = 1; i < checkpoints.size(); ++i) {
    ParameterSet::CheckCompatible(checkpoints[0], checkpoints[i]);
  }
  ParameterSet sum = PairwiseSum(checkpoints);
  sum.Scale(1.0 / static_cast<double>(checkpoints.size()));
  return sum;
}

}  // namespace ctclab::nn

// nn/parameter-set.h

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

#ifndef CTCLAB_NN_PARAMETER_SET_H_
#define CTCLAB_NN_PARAMETER_SET_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "base/sequence.h"

namespace ctclab::nn {

// Flat, ordered collection of named numeric arrays holding every model
// quantity: trainable weights plus batch-norm running statistics (the
// latter flagged non-trainable so optimizers skip them while EMA and
// checkpoint averaging still cover them).
//
// Two sets are compatible iff names, order, and shapes all match; every
// linear operation requires compatibility.  Mutation bumps a version
// counter that activation tapes use to detect staleness.
class ParameterSet {
 public:
  struct Entry {
    std::string name;
    Matrix value;
    bool trainable = true;
  };

  ParameterSet() = default;

  void Add(std::string name, Matrix value, bool trainable = true);

  int size() const { return static_cast<int>(entries_.size()); }
  const Entry& entry(int i) const { return entries_[i]; }
  const Matrix& value(int i) const { return entries_[i].value; }
  // Index of a named entry, or -1.
  int Find(std::string_view name) const;

  // Mutating access; bumps the version.
  Matrix& mutable_value(int i);

  uint64_t version() const { return version_; }

  static bool Compatible(const ParameterSet& a, const ParameterSet& b);
  static void CheckCompatible(const ParameterSet& a, const ParameterSet& b);

  void SetZero();
  void Scale(double c);
  // this += c * other (element-wise over every entry).
  void AddScaled(const ParameterSet& other, double c);
  // Same-shaped set with all entries zeroed; trainable flags preserved.
  ParameterSet ZerosLike() const;

  // L2 norm over trainable entries only.
  double TrainableNorm() const;

  // Total number of scalar values across all entries.
  int64_t NumValues() const;

 private:
  std::vector<Entry> entries_;
  uint64_t version_ = 0;
};

// Element-wise arithmetic mean via pairwise reduction (exact for a
// power-of-two count of identical inputs).  Throws on an empty list or
// incompatible members.
ParameterSet AverageCheckpoints(std::span<const ParameterSet> checkpoints);

}  // namespace ctclab::nn

#endif  // CTCLAB_NN_PARAMETER_SET_H_

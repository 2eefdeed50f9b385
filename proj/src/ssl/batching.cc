// ssl/batching.cc

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

#include "ssl/batching.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"
#include "base/rng.h"

namespace ctclab::ssl {

std::vector<Batch> ComposeBatches(int num_labeled, int num_unlabeled,
                                  int batch_size, uint64_t seed, int epoch,
                                  double sup_ratio_override) {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (num_labeled < 0 || num_unlabeled < 0) {
    throw ConfigError("negative set sizes");
  }

  // Labeled index stream, optionally re-tiled to hit the requested
  // supervised exposure.
  std::vector<int> labeled_pool;
  if (sup_ratio_override > 0.0 && sup_ratio_override < 1.0 &&
      num_unlabeled > 0 && num_labeled > 0) {
    int target = std::max(
        1, static_cast<int>(std::lround(sup_ratio_override /
                                        (1.0 - sup_ratio_override) *
                                        num_unlabeled)));
    labeled_pool.reserve(target);
    for (int i = 0; i < target; ++i) labeled_pool.push_back(i % num_labeled);
  } else {
    labeled_pool.resize(num_labeled);
    for (int i = 0; i < num_labeled; ++i) labeled_pool[i] = i;
  }

  struct Tagged {
    bool labeled;
    int index;
  };
  std::vector<Tagged> union_order;
  union_order.reserve(labeled_pool.size() + num_unlabeled);
  for (int i : labeled_pool) union_order.push_back({true, i});
  for (int i = 0; i < num_unlabeled; ++i) union_order.push_back({false, i});

  Rng rng = MakeRng(DeriveSeed(seed, "batch-shuffle",
                               {static_cast<uint64_t>(epoch)}));
  std::shuffle(union_order.begin(), union_order.end(), rng);

  std::vector<int> labeled_stream, unlabeled_stream;
  for (const Tagged& t : union_order) {
    (t.labeled ? labeled_stream : unlabeled_stream).push_back(t.index);
  }

  // Walk the shuffled union; the first unconsumed sample picks the stream
  // the next homogeneous batch is drawn from.
  std::vector<Batch> batches;
  size_t taken_labeled = 0, taken_unlabeled = 0;
  size_t seen_labeled = 0, seen_unlabeled = 0;
  for (const Tagged& t : union_order) {
    size_t rank = t.labeled ? seen_labeled++ : seen_unlabeled++;
    size_t& taken = t.labeled ? taken_labeled : taken_unlabeled;
    if (rank < taken) continue;  // already swept into an earlier batch
    const std::vector<int>& stream =
        t.labeled ? labeled_stream : unlabeled_stream;
    Batch b;
    b.labeled = t.labeled;
    size_t count = std::min(static_cast<size_t>(batch_size),
                            stream.size() - taken);
    b.indices.assign(stream.begin() + taken, stream.begin() + taken + count);
    taken += count;
    batches.push_back(std::move(b));
  }
  return batches;
}

}  // namespace ctclab::ssl

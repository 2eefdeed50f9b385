// ssl/batching.h

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

#ifndef CTCLAB_SSL_BATCHING_H_
#define CTCLAB_SSL_BATCHING_H_

#include <cstdint>
#include <vector>

namespace ctclab::ssl {

struct Batch {
  bool labeled = true;
  std::vector<int> indices;  // into the labeled or unlabeled set
};

// Uniformly shuffles the labeled+unlabeled union, seeded by (seed, epoch),
// then slices it into status-homogeneous batches: the shuffled order
// decides which stream each batch is drawn from, and each batch takes up
// to batch_size consecutive samples of that stream (in shuffle order).
// Every sample appears exactly once; the step count is
// ceil(N/batch_size) + ceil(M/batch_size).
//
// sup_ratio_override > 0 re-tiles the labeled stream so that roughly that
// fraction of steps is supervised (labeled samples then repeat within the
// epoch); <= 0 keeps the natural N:M exposure.
std::vector<Batch> ComposeBatches(int num_labeled, int num_unlabeled,
                                  int batch_size, uint64_t seed, int epoch,
                                  double sup_ratio_override = -1.0);

}  // namespace ctclab::ssl

#endif  // CTCLAB_SSL_BATCHING_H_

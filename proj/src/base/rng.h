// base/rng.h

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

#ifndef CTCLAB_BASE_RNG_H_
#define CTCLAB_BASE_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ctclab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent seed streams.
uint64_t Mix64(uint64_t x);

// Hash-chains a base seed with a purpose tag and indices so that every
// consumer (sample, epoch, mask, ...) gets its own reproducible stream.
uint64_t DeriveSeed(uint64_t base, std::string_view purpose,
                    std::initializer_list<uint64_t> path = {});

inline Rng MakeRng(uint64_t seed) { return Rng(seed); }

}  // namespace ctclab

#endif  // CTCLAB_BASE_RNG_H_

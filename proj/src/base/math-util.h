// base/math-util.h

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

#ifndef CTCLAB_BASE_MATH_UTIL_H_
#define CTCLAB_BASE_MATH_UTIL_H_

#include <cmath>
#include <limits>
#include <span>

namespace ctclab {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)), stable against underflow.  Either argument may be
// -inf; the max-shifted form keeps the result <= 0 exact when both are.
inline double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

inline double LogAdd(double a, double b, double c) {
  return LogAdd(LogAdd(a, b), c);
}

double LogSumExp(std::span<const double> values);

}  // namespace ctclab

#endif  // CTCLAB_BASE_MATH_UTIL_H_

// base/binary-io.h

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

#ifndef CTCLAB_BASE_BINARY_IO_H_
#define CTCLAB_BASE_BINARY_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "base/sequence.h"

namespace ctclab {

// Little-endian binary container shared by feature and posterior files:
//   u32 magic ("CLM1"), u32 rows, u32 cols, then rows*cols float64 values
//   in row-major order.
constexpr uint32_t kMatrixMagic = 0x314d4c43;  // "CLM1"

void WriteMatrix(std::ostream& os, const Matrix& m);
Matrix ReadMatrix(std::istream& is, const std::string& name_for_errors);

void WriteMatrixFile(const std::string& path, const Matrix& m);
Matrix ReadMatrixFile(const std::string& path);

// Low-level little-endian scalar helpers shared with the checkpoint format.
void WriteU32(std::ostream& os, uint32_t v);
void WriteU64(std::ostream& os, uint64_t v);
void WriteF64(std::ostream& os, double v);
uint32_t ReadU32(std::istream& is, const std::string& name_for_errors);
uint64_t ReadU64(std::istream& is, const std::string& name_for_errors);
double ReadF64(std::istream& is, const std::string& name_for_errors);

}  // namespace ctclab

#endif  // CTCLAB_BASE_BINARY_IO_H_

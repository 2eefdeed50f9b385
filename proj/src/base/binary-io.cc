// base/binary-io.cc

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

#include "base/binary-io.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "base/error.h"

static_assert(std::endian::native == std::endian::little,
              "on-disk formats assume a little-endian host");

namespace ctclab {

void WriteU32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void WriteU64(std::ostream& os, uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void WriteF64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

namespace {

template <typename T>
T ReadScalar(std::istream& is, const std::string& name) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw IoError("truncated read in " + name);
  return v;
}

}  // namespace

uint32_t ReadU32(std::istream& is, const std::string& name) {
  return ReadScalar<uint32_t>(is, name);
}

uint64_t ReadU64(std::istream& is, const std::string& name) {
  return ReadScalar<uint64_t>(is, name);
}

double ReadF64(std::istream& is, const std::string& name) {
  return ReadScalar<double>(is, name);
}

void WriteMatrix(std::ostream& os, const Matrix& m) {
  WriteU32(os, kMatrixMagic);
  WriteU32(os, static_cast<uint32_t>(m.rows()));
  WriteU32(os, static_cast<uint32_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      WriteF64(os, m(r, c));
    }
  }
}

Matrix ReadMatrix(std::istream& is, const std::string& name) {
  uint32_t magic = ReadU32(is, name);
  if (magic != kMatrixMagic) {
    throw IoError("bad magic in " + name + " (not a ctclab matrix file)");
  }
  uint32_t rows = ReadU32(is, name);
  uint32_t cols = ReadU32(is, name);
  Matrix m(rows, cols);
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c < cols; ++c) {
      m(r, c) = ReadF64(is, name);
    }
  }
  return m;
}

void WriteMatrixFile(const std::string& path, const Matrix& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  WriteMatrix(os, m);
  if (!os) throw IoError("write failed: " + path);
}

Matrix ReadMatrixFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("missing input: " + path);
  return ReadMatrix(is, path);
}

}  // namespace ctclab

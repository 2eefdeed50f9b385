// nn/checkpoint.cc

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

#include "nn/checkpoint.h"

#include <fstream>

#include "base/binary-io.h"
#include "base/error.h"

namespace ctclab::nn {

namespace {

constexpr uint32_t kCheckpointMagic = 0x314b4c43;  // "CLK1"
constexpr uint32_t kFormatVersion = 1;

uint32_t NormTag(const NormKind& k) { return static_cast<uint32_t>(k.kind); }

NormKind NormFromTag(uint32_t tag, uint32_t groups) {
  switch (tag) {
    case NormKind::kBatch:
      return NormKind::Batch();
    case NormKind::kGroup:
      return NormKind::Group(static_cast<int>(groups));
    case NormKind::kInstance:
      return NormKind::Instance();
    case NormKind::kLayer:
      return NormKind::Layer();
    default:
      throw IoError("checkpoint holds an unknown norm kind tag");
  }
}

}  // namespace

void WriteCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  WriteU32(os, kCheckpointMagic);
  WriteU32(os, kFormatVersion);
  const EncoderConfig& c = ckpt.config;
  WriteU32(os, static_cast<uint32_t>(c.num_blocks));
  WriteU32(os, static_cast<uint32_t>(c.d_model));
  WriteU32(os, static_cast<uint32_t>(c.num_heads));
  WriteU32(os, static_cast<uint32_t>(c.d_ff));
  WriteU32(os, static_cast<uint32_t>(c.conv_kernel));
  WriteU32(os, NormTag(c.norm_kind));
  WriteU32(os, static_cast<uint32_t>(c.norm_kind.num_groups));
  WriteU32(os, static_cast<uint32_t>(c.subsample_factor));
  WriteU32(os, static_cast<uint32_t>(c.feature_dim));
  WriteU32(os, static_cast<uint32_t>(c.vocab_size_with_blank));
  WriteU32(os, static_cast<uint32_t>(ckpt.params.size()));
  for (int i = 0; i < ckpt.params.size(); ++i) {
    const auto& e = ckpt.params.entry(i);
    WriteU32(os, static_cast<uint32_t>(e.name.size()));
    os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    WriteU32(os, static_cast<uint32_t>(e.value.rows()));
    WriteU32(os, static_cast<uint32_t>(e.value.cols()));
    char trainable = e.trainable ? 1 : 0;
    os.write(&trainable, 1);
    for (Eigen::Index r = 0; r < e.value.rows(); ++r) {
      for (Eigen::Index col = 0; col < e.value.cols(); ++col) {
        WriteF64(os, e.value(r, col));
      }
    }
  }
  if (!os) throw IoError("write failed: " + path);
}

Checkpoint ReadCheckpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("missing input: " + path);
  if (ReadU32(is, path) != kCheckpointMagic) {
    throw IoError("bad magic in " + path + " (not a ctclab checkpoint)");
  }
  if (ReadU32(is, path) != kFormatVersion) {
    throw IoError("unsupported checkpoint format version in " + path);
  }
  Checkpoint ckpt;
  EncoderConfig& c = ckpt.config;
  c.num_blocks = static_cast<int>(ReadU32(is, path));
  c.d_model = static_cast<int>(ReadU32(is, path));
  c.num_heads = static_cast<int>(ReadU32(is, path));
  c.d_ff = static_cast<int>(ReadU32(is, path));
  c.conv_kernel = static_cast<int>(ReadU32(is, path));
  uint32_t tag = ReadU32(is, path);
  uint32_t groups = ReadU32(is, path);
  c.norm_kind = NormFromTag(tag, groups);
  c.subsample_factor = static_cast<int>(ReadU32(is, path));
  c.feature_dim = static_cast<int>(ReadU32(is, path));
  c.vocab_size_with_blank = static_cast<int>(ReadU32(is, path));
  uint32_t count = ReadU32(is, path);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t name_len = ReadU32(is, path);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw IoError("truncated read in " + path);
    uint32_t rows = ReadU32(is, path);
    uint32_t cols = ReadU32(is, path);
    char trainable = 0;
    is.read(&trainable, 1);
    if (!is) throw IoError("truncated read in " + path);
    Matrix v(rows, cols);
    for (uint32_t r = 0; r < rows; ++r) {
      for (uint32_t col = 0; col < cols; ++col) {
        v(r, col) = ReadF64(is, path);
      }
    }
    ckpt.params.Add(std::move(name), std::move(v), trainable != 0);
  }
  return ckpt;
}

}  // namespace ctclab::nn

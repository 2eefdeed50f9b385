// ctc/vocabulary.cc

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

#include "ctc/vocabulary.h"

#include <unordered_set>

#include "base/error.h"

namespace ctclab {

Vocabulary::Vocabulary(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw ConfigError("vocabulary must hold >= 1 token");
  std::unordered_set<std::string_view> seen;
  for (const auto& t : tokens_) {
    if (t.empty()) throw ConfigError("vocabulary token strings must be non-empty");
    if (!seen.insert(t).second) {
      throw ConfigError("duplicate vocabulary token: " + t);
    }
  }
  uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (const auto& t : tokens_) {
    for (char c : t) {
      h ^= static_cast<uint64_t>(static_cast<unsigned char>(c));
      h *= 1099511628211ull;
    }
    h ^= 0xff;  // token separator
    h *= 1099511628211ull;
  }
  hash_ = h;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) {
    throw InputDomainError("token id out of range: " + std::to_string(id));
  }
  return tokens_[id];
}

std::optional<int> Vocabulary::id(std::string_view token) const {
  for (int i = 0; i < size(); ++i) {
    if (tokens_[i] == token) return i;
  }
  return std::nullopt;
}

}  // namespace ctclab

// ctc/vocabulary.h

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

#ifndef CTCLAB_CTC_VOCABULARY_H_
#define CTCLAB_CTC_VOCABULARY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctclab {

// Token inventory for both the acoustic model and the LM.  The blank
// label is not a token; it always occupies the last output index, so
// ids 0..size()-1 are tokens and id size() is blank.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  int blank_id() const { return size(); }
  int num_labels() const { return size() + 1; }  // tokens + blank

  const std::string& token(int id) const;
  std::optional<int> id(std::string_view token) const;

  const std::vector<std::string>& tokens() const { return tokens_; }

  // FNV-1a over the token list; binds LM files to the vocabulary they
  // were trained with.
  uint64_t hash() const { return hash_; }

  bool operator==(const Vocabulary& other) const = default;

 private:
  std::vector<std::string> tokens_;
  uint64_t hash_ = 0;
};

}  // namespace ctclab

#endif  // CTCLAB_CTC_VOCABULARY_H_

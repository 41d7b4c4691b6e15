// Copyright 2026 The Translationese Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TLAB_LEXICON_H_
#define TLAB_LEXICON_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tlab/textnorm.h"

namespace tlab {

inline constexpr size_t kMaxMarkerLength = 5;

// Cohesive-marker lexicon: lowercased token sequences of 1-5 tokens, kept
// sorted by descending length and then lexicographically, no duplicates.
class MarkerLexicon {
 public:
  // One marker per line; "#" starts a comment. Entries are tokenized and
  // case-folded like corpus text. Throws EmptyLexicon or InvalidConfig.
  static MarkerLexicon Parse(std::string_view contents, std::string source);
  static MarkerLexicon Load(const std::string& path);
  // The shipped 40-entry lexicon (identical to data/cohesive_markers.txt).
  static MarkerLexicon Default();

  const std::vector<std::vector<std::string>>& markers() const {
    return markers_;
  }
  const std::string& source() const { return source_; }
  // SHA-256 over the canonical marker list; independent of comments and
  // entry order in the source file.
  const std::string& hash() const { return hash_; }
  size_t size() const { return markers_.size(); }
  std::string MarkerText(size_t index) const;

  // Longest marker matching `tokens` starting at `pos` (case-insensitive,
  // token-aligned), as an index into markers().
  std::optional<size_t> LongestMatchAt(std::span<const Token> tokens,
                                       size_t pos) const;

 private:
  std::vector<std::vector<std::string>> markers_;
  std::string source_;
  std::string hash_;
  // First token -> marker indices, longest first.
  std::unordered_map<std::string, std::vector<size_t>> by_first_;
};

// The shipped default lexicon as file text.
std::string_view DefaultLexiconText();

}  // namespace tlab

#endif  // TLAB_LEXICON_H_

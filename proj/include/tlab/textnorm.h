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

// Deterministic Treebank-style tokenization and case folding. Every corpus
// count in the toolkit goes through this module.

#ifndef TLAB_TEXTNORM_H_
#define TLAB_TEXTNORM_H_

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tlab {

// Recorded in every metric report; bump whenever tokenization changes.
inline constexpr std::string_view kTokenizerVersion = "tlab-treebank-1";

struct Token {
  std::string surface;
  std::string lowered;
  size_t index = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenizedSentence {
  std::string id;
  std::vector<Token> tokens;

  friend bool operator==(const TokenizedSentence&,
                         const TokenizedSentence&) = default;
};

// Simple case folding over ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic. Other code points pass through unchanged.
std::string CaseFold(std::string_view text);

Token MakeToken(std::string surface, size_t index);

// Splits on whitespace, then detaches edge punctuation and clitics:
//   - a chunk made only of punctuation becomes one token per run of
//     identical characters ("..." stays whole, "?!" becomes "?" "!");
//   - trailing punctuation runs are detached, except that a lone "." is
//     detached only from the last chunk of the sentence ("Mr." survives
//     mid-sentence, the sentence-final period does not);
//   - leading punctuation runs are detached unless the rest is a clitic;
//   - "n't" and 's 're 've 'll 'd 'm are split off the word they end.
// Interior punctuation is never split, so "1,000", "3.5" and "well-known"
// stay whole. Throws EmptySentence on whitespace-only input.
TokenizedSentence Tokenize(std::string_view text, std::string id = {});

// Space-joined surfaces.
std::string JoinTokens(std::span<const Token> tokens);

std::set<std::string> CasefoldTypes(std::span<const Token> tokens);

}  // namespace tlab

#endif  // TLAB_TEXTNORM_H_

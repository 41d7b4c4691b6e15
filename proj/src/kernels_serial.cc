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

#include <string_view>
#include <unordered_set>

#include "tlab/error.h"
#include "tlab/kernels.h"

namespace tlab {

void ScanSentence(std::span<const Token> tokens, const MarkerLexicon& lexicon,
                  CohesiveCounts& counts) {
  size_t pos = 0;
  while (pos < tokens.size()) {
    std::optional<size_t> match = lexicon.LongestMatchAt(tokens, pos);
    if (match) {
      ++counts.total;
      ++counts.per_marker[*match];
      pos += lexicon.markers()[*match].size();
    } else {
      ++pos;
    }
  }
}

void CheckTagged(const TaggedSentence& sentence) {
  if (sentence.tags.size() != sentence.sentence.tokens.size()) {
    throw Error(ErrorKind::kUntaggedToken,
                "sentence '" + sentence.sentence.id + "' has " +
                    std::to_string(sentence.tags.size()) + " tags for " +
                    std::to_string(sentence.sentence.tokens.size()) +
                    " tokens");
  }
}

namespace serial {

std::vector<TokenizedSentence> TokenizeCorpus(const Corpus& corpus) {
  std::vector<TokenizedSentence> out;
  out.reserve(corpus.size());
  for (const Sentence& s : corpus.sentences) {
    out.push_back(Tokenize(s.text, s.id));
  }
  return out;
}

std::vector<std::vector<PosTag>> TagCorpus(
    const TaggerModel& model, std::span<const TokenizedSentence> sentences) {
  std::vector<std::vector<PosTag>> out;
  out.reserve(sentences.size());
  for (const TokenizedSentence& s : sentences) out.push_back(model.Tag(s));
  return out;
}

size_t CountTokens(std::span<const TokenizedSentence> sentences) {
  size_t total = 0;
  for (const TokenizedSentence& s : sentences) total += s.tokens.size();
  return total;
}

size_t CountTypes(std::span<const TokenizedSentence> sentences) {
  std::unordered_set<std::string_view> types;
  for (const TokenizedSentence& s : sentences) {
    for (const Token& t : s.tokens) types.insert(t.lowered);
  }
  return types.size();
}

CohesiveCounts CountCohesive(std::span<const TokenizedSentence> sentences,
                             const MarkerLexicon& lexicon) {
  CohesiveCounts counts;
  counts.per_marker.assign(lexicon.size(), 0);
  for (const TokenizedSentence& s : sentences) {
    ScanSentence(s.tokens, lexicon, counts);
  }
  return counts;
}

TagCounts CountTags(std::span<const TaggedSentence> sentences) {
  TagCounts counts{};
  for (const TaggedSentence& s : sentences) {
    CheckTagged(s);
    for (PosTag tag : s.tags) ++counts[static_cast<size_t>(tag)];
  }
  return counts;
}

}  // namespace serial
}  // namespace tlab

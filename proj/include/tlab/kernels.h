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

// Corpus-level kernels. Each has a serial reference implementation and an
// OpenMP implementation over sentences; the two must agree exactly, which
// the test suite checks and bench/ measures.

#ifndef TLAB_KERNELS_H_
#define TLAB_KERNELS_H_

#include <array>
#include <span>
#include <vector>

#include "tlab/corpus.h"
#include "tlab/lexicon.h"
#include "tlab/postag.h"
#include "tlab/textnorm.h"

namespace tlab {

enum class Execution { kSerial, kParallel };

struct CohesiveCounts {
  size_t total = 0;
  std::vector<size_t> per_marker;  // parallel to MarkerLexicon::markers()

  friend bool operator==(const CohesiveCounts&,
                         const CohesiveCounts&) = default;
};

using TagCounts = std::array<size_t, kNumTags>;

namespace serial {

std::vector<TokenizedSentence> TokenizeCorpus(const Corpus& corpus);
std::vector<std::vector<PosTag>> TagCorpus(
    const TaggerModel& model, std::span<const TokenizedSentence> sentences);
size_t CountTokens(std::span<const TokenizedSentence> sentences);
size_t CountTypes(std::span<const TokenizedSentence> sentences);
CohesiveCounts CountCohesive(std::span<const TokenizedSentence> sentences,
                             const MarkerLexicon& lexicon);
TagCounts CountTags(std::span<const TaggedSentence> sentences);

}  // namespace serial

namespace parallel {

std::vector<TokenizedSentence> TokenizeCorpus(const Corpus& corpus);
std::vector<std::vector<PosTag>> TagCorpus(
    const TaggerModel& model, std::span<const TokenizedSentence> sentences);
size_t CountTokens(std::span<const TokenizedSentence> sentences);
size_t CountTypes(std::span<const TokenizedSentence> sentences);
CohesiveCounts CountCohesive(std::span<const TokenizedSentence> sentences,
                             const MarkerLexicon& lexicon);
TagCounts CountTags(std::span<const TaggedSentence> sentences);

}  // namespace parallel

// Non-overlapping longest-match scan of one sentence; adds into `counts`.
void ScanSentence(std::span<const Token> tokens, const MarkerLexicon& lexicon,
                  CohesiveCounts& counts);

// Throws UntaggedToken when a sentence's tags do not cover its tokens.
void CheckTagged(const TaggedSentence& sentence);

}  // namespace tlab

#endif  // TLAB_KERNELS_H_

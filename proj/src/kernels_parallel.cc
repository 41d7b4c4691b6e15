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

#include <cstdint>
#include <exception>
#include <string_view>
#include <unordered_set>

#include "tlab/kernels.h"

namespace tlab::parallel {
namespace {

using Index = std::int64_t;

// Runs body(i) for i in [0, n). Exceptions cannot cross an OpenMP region,
// so the one from the lowest index is captured and rethrown afterwards.
template <typename Body>
void ForEach(size_t n, Body&& body) {
  std::exception_ptr error;
  Index error_index = INT64_MAX;
#pragma omp parallel for schedule(dynamic, 64)
  for (Index i = 0; i < static_cast<Index>(n); ++i) {
    try {
      body(static_cast<size_t>(i));
    } catch (...) {
#pragma omp critical(tlab_kernel_error)
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<TokenizedSentence> TokenizeCorpus(const Corpus& corpus) {
  std::vector<TokenizedSentence> out(corpus.size());
  ForEach(corpus.size(), [&](size_t i) {
    const Sentence& s = corpus.sentences[i];
    out[i] = Tokenize(s.text, s.id);
  });
  return out;
}

std::vector<std::vector<PosTag>> TagCorpus(
    const TaggerModel& model, std::span<const TokenizedSentence> sentences) {
  std::vector<std::vector<PosTag>> out(sentences.size());
  ForEach(sentences.size(), [&](size_t i) { out[i] = model.Tag(sentences[i]); });
  return out;
}

size_t CountTokens(std::span<const TokenizedSentence> sentences) {
  size_t total = 0;
  const Index n = static_cast<Index>(sentences.size());
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (Index i = 0; i < n; ++i) total += sentences[i].tokens.size();
  return total;
}

size_t CountTypes(std::span<const TokenizedSentence> sentences) {
  std::unordered_set<std::string_view> merged;
  const Index n = static_cast<Index>(sentences.size());
#pragma omp parallel
  {
    std::unordered_set<std::string_view> local;
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      for (const Token& t : sentences[i].tokens) local.insert(t.lowered);
    }
#pragma omp critical(tlab_types_merge)
    merged.insert(local.begin(), local.end());
  }
  return merged.size();
}

CohesiveCounts CountCohesive(std::span<const TokenizedSentence> sentences,
                             const MarkerLexicon& lexicon) {
  CohesiveCounts counts;
  counts.per_marker.assign(lexicon.size(), 0);
  const Index n = static_cast<Index>(sentences.size());
#pragma omp parallel
  {
    CohesiveCounts local;
    local.per_marker.assign(lexicon.size(), 0);
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      ScanSentence(sentences[i].tokens, lexicon, local);
    }
#pragma omp critical(tlab_cohesive_merge)
    {
      counts.total += local.total;
      for (size_t m = 0; m < local.per_marker.size(); ++m) {
        counts.per_marker[m] += local.per_marker[m];
      }
    }
  }
  return counts;
}

TagCounts CountTags(std::span<const TaggedSentence> sentences) {
  ForEach(sentences.size(), [&](size_t i) { CheckTagged(sentences[i]); });
  TagCounts counts{};
  const Index n = static_cast<Index>(sentences.size());
#pragma omp parallel
  {
    TagCounts local{};
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      for (PosTag tag : sentences[i].tags) ++local[static_cast<size_t>(tag)];
    }
#pragma omp critical(tlab_tags_merge)
    for (size_t t = 0; t < kNumTags; ++t) counts[t] += local[t];
  }
  return counts;
}

}  // namespace tlab::parallel

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

// Corpus-level translationese metrics: type-token ratio, cohesive-marker
// counts, part-of-speech relative frequencies and sentence length.

#ifndef TLAB_METRICS_H_
#define TLAB_METRICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "tlab/kernels.h"
#include "tlab/lexicon.h"
#include "tlab/postag.h"
#include "tlab/textnorm.h"

namespace tlab {

struct TtrResult {
  size_t type_count = 0;
  size_t token_count = 0;
  double ttr = 0.0;
};

struct LengthStats {
  double avg_sentence_length = 0.0;
  size_t token_count = 0;
  size_t sentence_count = 0;
};

using PosFrequencies = std::array<double, kNumTags>;

// Pooled over the whole corpus with a single denominator. Note that TTR is
// not additive under corpus concatenation, unlike the raw counts.
// Throws EmptyCorpus when there are no tokens.
TtrResult ComputeTtr(std::span<const TokenizedSentence> corpus,
                     Execution execution = Execution::kParallel);

CohesiveCounts CountCohesive(std::span<const TokenizedSentence> corpus,
                             const MarkerLexicon& lexicon,
                             Execution execution = Execution::kParallel);

// count(tag) / tokens over the pooled corpus; absent tags are 0.0.
// Throws UntaggedToken or EmptyCorpus.
PosFrequencies ComputePosFrequencies(std::span<const TaggedSentence> corpus,
                                     Execution execution = Execution::kParallel);

LengthStats ComputeLengthStats(std::span<const TokenizedSentence> corpus);

// Where a report's numbers came from. Reports are only comparable when
// tokenizer, tagger and lexicon agree.
struct Provenance {
  std::string tokenizer_version;
  std::string tagger;  // "model:<sha256>", "pretagged:<label>" or empty
  std::string lexicon_source;
  std::string lexicon_hash;
  std::optional<uint64_t> seed;
  std::map<std::string, std::string> backend_versions;
};

struct MetricReport {
  std::string corpus_name;
  size_t sentence_count = 0;
  size_t token_count = 0;
  size_t type_count = 0;
  double ttr = 0.0;
  size_t cohesive_count = 0;
  std::map<std::string, size_t> cohesive_breakdown;  // non-zero markers only
  std::optional<PosFrequencies> pos_freq;
  size_t pos_token_count = 0;
  double avg_sentence_length = 0.0;
  Provenance provenance;
};

MetricReport BuildMetricReport(std::string corpus_name,
                               std::span<const TokenizedSentence> corpus,
                               const MarkerLexicon& lexicon,
                               std::span<const TaggedSentence> tagged,
                               Provenance provenance);

nlohmann::ordered_json ToJson(const Provenance& provenance);
Provenance ProvenanceFromJson(const nlohmann::json& json);
nlohmann::ordered_json ToJson(const MetricReport& report);
// Throws InvalidConfig on a missing or mistyped field.
MetricReport MetricReportFromJson(const nlohmann::json& json);
MetricReport LoadMetricReport(const std::string& path);

}  // namespace tlab

#endif  // TLAB_METRICS_H_

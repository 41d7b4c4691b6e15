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

// Comparison tables: TTR and cohesive-marker improvement over the
// translation baseline, part-of-speech closeness to originally written
// text, an optional similarity-score table and human-evaluation summaries.

#ifndef TLAB_REPORT_H_
#define TLAB_REPORT_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlab/evalharness.h"
#include "tlab/metrics.h"
#include "tlab/postag.h"

namespace tlab {

struct Comparison {
  MetricReport baseline;                 // the translations
  std::optional<MetricReport> original;  // originally written text
  std::map<std::string, MetricReport> systems;
};

// system id -> metric name -> score.
using SimilarityTable = std::map<std::string, std::map<std::string, double>>;

// The three checks throw ProvenanceMismatch when the reports were computed
// with a different tokenizer, lexicon or tagger respectively.
bool TtrImproved(const MetricReport& system, const MetricReport& baseline);
bool CohesiveImproved(const MetricReport& system, const MetricReport& baseline);
// Per tag: the system frequency is strictly closer to the original than the
// baseline frequency. Throws InvalidConfig when a report has no POS data.
std::map<PosTag, bool> PosCloseness(const MetricReport& system,
                                    const MetricReport& baseline,
                                    const MetricReport& original,
                                    std::span<const PosTag> tags);

// Throws ProvenanceMismatch unless every report agrees with the baseline on
// tokenizer, lexicon and (where POS data is present) tagger.
void ValidateComparison(const Comparison& comparison);

struct RenderOptions {
  std::vector<PosTag> tags = {PosTag::kAdp, PosTag::kAdv, PosTag::kDet};
  std::optional<SimilarityTable> similarity;
};

struct ReportDocuments {
  std::string markdown;
  std::string json;
  std::string tsv;
};

ReportDocuments RenderComparison(const Comparison& comparison,
                                 const RenderOptions& options = {});

// Writes report.md, report.json and report.tsv into `directory`.
void WriteReport(const ReportDocuments& documents, const std::string& directory);

// Accepts {"<system>": {"<metric>": number}} optionally wrapped in
// {"systems": ...}. Throws InvalidConfig.
SimilarityTable SimilarityFromJson(const nlohmann::json& json);
SimilarityTable LoadSimilarity(const std::string& path);

// Mean scores with ranks in parentheses, one row per system, plus the
// agreement line when `iaa` is given.
std::string RenderEvalTable(
    std::span<const SystemScore> scores,
    const std::map<Dimension, std::optional<double>>* iaa = nullptr);
nlohmann::ordered_json EvalToJson(
    std::span<const SystemScore> scores,
    const std::map<Dimension, std::optional<double>>* iaa = nullptr);

}  // namespace tlab

#endif  // TLAB_REPORT_H_

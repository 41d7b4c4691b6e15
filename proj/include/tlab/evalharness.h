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

// Human evaluation: blinded annotation sheets, judgment ingestion, mean
// scores with dense ranks, and Spearman inter-annotator agreement.

#ifndef TLAB_EVALHARNESS_H_
#define TLAB_EVALHARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tlab/corpus.h"

namespace tlab {

inline constexpr std::string_view kOriginalSystem = "original";

enum class Dimension { kAdequacy, kFluency };

std::string_view DimensionName(Dimension dimension);
// Throws InvalidJudgment.
Dimension ParseDimension(std::string_view name);

struct Candidate {
  std::string label;  // "A", "B", ...
  std::string text;
};

struct SheetItem {
  std::string item_id;
  std::optional<std::string> reference;  // adequacy only
  std::vector<Candidate> candidates;
};

struct AnnotationSheet {
  std::string annotator;
  Dimension dimension = Dimension::kFluency;
  uint64_t seed = 0;
  std::vector<SheetItem> items;
};

// item id -> blinded label -> system id.
using BlindingMap = std::map<std::string, std::map<std::string, std::string>>;

struct SheetSet {
  Dimension dimension = Dimension::kFluency;
  uint64_t seed = 0;
  std::vector<AnnotationSheet> sheets;  // one per annotator, input order
  BlindingMap blinding;
};

// Fluency candidates are every system plus the original; adequacy shows the
// original as the reference and only systems as candidates. Each item gets
// its own permutation from a single seeded stream; all annotators see the
// same order for an item. Throws MissingSystemOutput and InvalidConfig.
SheetSet MakeSheets(const AlignedSet& aligned,
                    std::span<const std::string> item_ids,
                    std::span<const std::string> annotators,
                    Dimension dimension, uint64_t seed);

// Label for candidate position `index`: A..Z, then AA, AB, ...
std::string BlindLabel(size_t index);

std::string RenderSheetText(const AnnotationSheet& sheet);
nlohmann::ordered_json ToJson(const AnnotationSheet& sheet);
nlohmann::ordered_json BlindingToJson(const SheetSet& sheets);
// Throws InvalidConfig.
BlindingMap BlindingFromJson(const nlohmann::json& json);
BlindingMap LoadBlinding(const std::string& path);

// Writes sheet_<annotator>.txt, sheet_<annotator>.json and
// blinding_<seed>.json into `directory`.
void WriteSheets(const SheetSet& sheets, const std::string& directory);

struct Judgment {
  std::string annotator;
  std::string item_id;
  std::string system_id;
  Dimension dimension = Dimension::kFluency;
  int score = 0;
};

// CSV with header annotator,item_id,system_id,dimension,score. When a
// blinding map is given, system_id holds blinded labels and is mapped back.
// Rows are validated as by ValidateJudgments.
std::vector<Judgment> ParseJudgments(std::string_view contents,
                                     const std::string& source,
                                     const BlindingMap* blinding = nullptr);
std::vector<Judgment> LoadJudgments(const std::string& path,
                                    const BlindingMap* blinding = nullptr);

// Throws ScoreOutOfRange (outside 1..4), InvalidJudgment (adequacy of the
// original, empty fields) and DuplicateJudgment.
void ValidateJudgments(std::span<const Judgment> judgments);

struct SystemScore {
  std::string system_id;
  Dimension dimension = Dimension::kFluency;
  int64_t sum = 0;
  size_t count = 0;
  double mean = 0.0;
  int rank = 0;  // dense, 1 = highest mean
};

// Ordered by dimension (adequacy first), then rank, then system id.
std::vector<SystemScore> Aggregate(std::span<const Judgment> judgments);

// 1-based ranks with ties sharing their average rank.
std::vector<double> AverageRanks(std::span<const double> values);

// Spearman correlation: Pearson over average ranks. nullopt when either
// side has no variance or fewer than two values.
std::optional<double> SpearmanRho(std::span<const double> x,
                                  std::span<const double> y);

// Pairs judgments on (item, system) per dimension; each pair must come from
// exactly two annotators, the lexicographically smaller one supplying x.
// Throws UnpairedJudgments with the number of unpaired keys.
std::map<Dimension, std::optional<double>> SpearmanIaa(
    std::span<const Judgment> judgments);

}  // namespace tlab

#endif  // TLAB_EVALHARNESS_H_

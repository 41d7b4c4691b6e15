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

#include "tlab/evalharness.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "tlab/error.h"
#include "tlab/hash.h"
#include "tlab/random.h"

namespace tlab {
namespace {

void CheckAnnotatorName(const std::string& name) {
  if (name.empty() || name.find_first_of("/\\ \t\r\n") != std::string::npos ||
      name == "." || name == "..") {
    throw Error(ErrorKind::kInvalidConfig,
                "annotator name '" + name + "' is not usable in a file name");
  }
}

// One CSV record; fields may be double-quoted with "" escapes.
std::vector<std::string> SplitCsv(std::string_view line,
                                  const std::string& where) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) {
    throw Error(ErrorKind::kInvalidJudgment, where + ": unterminated quote");
  }
  for (std::string& field : fields) {
    size_t first = field.find_first_not_of(" \t");
    size_t last = field.find_last_not_of(" \t");
    field = first == std::string::npos ? ""
                                       : field.substr(first, last - first + 1);
  }
  return fields;
}

std::string Describe(const Judgment& j) {
  return "(" + j.annotator + ", " + j.item_id + ", " + j.system_id + ", " +
         std::string(DimensionName(j.dimension)) + ")";
}

}  // namespace

std::string_view DimensionName(Dimension dimension) {
  return dimension == Dimension::kAdequacy ? "adequacy" : "fluency";
}

Dimension ParseDimension(std::string_view name) {
  if (name == "adequacy") return Dimension::kAdequacy;
  if (name == "fluency") return Dimension::kFluency;
  throw Error(ErrorKind::kInvalidJudgment,
              "unknown dimension '" + std::string(name) + "'");
}

std::string BlindLabel(size_t index) {
  std::string label;
  size_t n = index + 1;
  while (n > 0) {
    --n;
    label.insert(label.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return label;
}

SheetSet MakeSheets(const AlignedSet& aligned,
                    std::span<const std::string> item_ids,
                    std::span<const std::string> annotators,
                    Dimension dimension, uint64_t seed) {
  if (annotators.empty()) {
    throw Error(ErrorKind::kInvalidConfig, "no annotators given");
  }
  std::set<std::string> seen;
  for (const std::string& annotator : annotators) {
    CheckAnnotatorName(annotator);
    if (!seen.insert(annotator).second) {
      throw Error(ErrorKind::kInvalidConfig,
                  "annotator '" + annotator + "' listed twice");
    }
  }
  std::vector<std::string> systems;
  for (const auto& [system_id, corpus] : aligned.outputs()) {
    systems.push_back(system_id);
  }
  if (dimension == Dimension::kFluency) {
    systems.emplace_back(kOriginalSystem);
  }
  if (systems.empty()) {
    throw Error(ErrorKind::kInvalidConfig, "no system outputs to judge");
  }

  SheetSet result;
  result.dimension = dimension;
  result.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<SheetItem> items;
  std::set<std::string> seen_items;
  for (const std::string& item_id : item_ids) {
    if (!seen_items.insert(item_id).second) {
      throw Error(ErrorKind::kInvalidConfig,
                  "item '" + item_id + "' listed twice");
    }
    SheetItem item;
    item.item_id = item_id;
    if (dimension == Dimension::kAdequacy) {
      item.reference =
          aligned.TextFor(std::string(kOriginalSystem), item_id);
    }
    std::vector<std::string> order = systems;
    Shuffle(order, rng);
    auto& labels = result.blinding[item_id];
    for (size_t k = 0; k < order.size(); ++k) {
      std::string label = BlindLabel(k);
      item.candidates.push_back({label, aligned.TextFor(order[k], item_id)});
      labels.emplace(label, order[k]);
    }
    items.push_back(std::move(item));
  }
  for (const std::string& annotator : annotators) {
    result.sheets.push_back({annotator, dimension, seed, items});
  }
  return result;
}

std::string RenderSheetText(const AnnotationSheet& sheet) {
  std::string out;
  out += "Annotator: " + sheet.annotator + "\n";
  out += "Dimension: " + std::string(DimensionName(sheet.dimension)) +
         " (score each candidate from 1 to 4)\n";
  out += "Seed: " + std::to_string(sheet.seed) + "\n";
  for (size_t i = 0; i < sheet.items.size(); ++i) {
    const SheetItem& item = sheet.items[i];
    out += "\nItem " + std::to_string(i + 1) + " [" + item.item_id + "]\n";
    if (item.reference) out += "  Reference: " + *item.reference + "\n";
    for (const Candidate& candidate : item.candidates) {
      out += "  (" + candidate.label + ") " + candidate.text + "\n";
    }
  }
  return out;
}

nlohmann::ordered_json ToJson(const AnnotationSheet& sheet) {
  nlohmann::ordered_json out;
  out["annotator"] = sheet.annotator;
  out["dimension"] = DimensionName(sheet.dimension);
  out["seed"] = sheet.seed;
  out["items"] = nlohmann::ordered_json::array();
  for (const SheetItem& item : sheet.items) {
    nlohmann::ordered_json entry;
    entry["item_id"] = item.item_id;
    if (item.reference) entry["reference"] = *item.reference;
    entry["candidates"] = nlohmann::ordered_json::array();
    for (const Candidate& candidate : item.candidates) {
      entry["candidates"].push_back(
          {{"label", candidate.label}, {"text", candidate.text}});
    }
    out["items"].push_back(std::move(entry));
  }
  return out;
}

nlohmann::ordered_json BlindingToJson(const SheetSet& sheets) {
  nlohmann::ordered_json out;
  out["seed"] = sheets.seed;
  out["dimension"] = DimensionName(sheets.dimension);
  nlohmann::ordered_json items = nlohmann::ordered_json::object();
  for (const auto& [item_id, labels] : sheets.blinding) {
    nlohmann::ordered_json entry = nlohmann::ordered_json::object();
    for (const auto& [label, system] : labels) entry[label] = system;
    items[item_id] = std::move(entry);
  }
  out["items"] = std::move(items);
  return out;
}

BlindingMap BlindingFromJson(const nlohmann::json& json) {
  BlindingMap blinding;
  try {
    for (const auto& [item_id, labels] : json.at("items").items()) {
      auto& entry = blinding[item_id];
      std::set<std::string> systems;
      for (const auto& [label, system] : labels.items()) {
        std::string id = system.get<std::string>();
        if (!systems.insert(id).second) {
          throw Error(ErrorKind::kInvalidConfig,
                      "blinding for item '" + item_id +
                          "' maps two labels to '" + id + "'");
        }
        entry.emplace(label, std::move(id));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidConfig,
                std::string("malformed blinding map: ") + e.what());
  }
  return blinding;
}

BlindingMap LoadBlinding(const std::string& path) {
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidConfig, path + ": " + e.what());
  }
  return BlindingFromJson(json);
}

void WriteSheets(const SheetSet& sheets, const std::string& directory) {
  std::filesystem::path dir(directory);
  for (const AnnotationSheet& sheet : sheets.sheets) {
    std::string stem = "sheet_" + sheet.annotator;
    WriteFileAtomic((dir / (stem + ".txt")).string(), RenderSheetText(sheet));
    WriteFileAtomic((dir / (stem + ".json")).string(),
                    ToJson(sheet).dump(2) + "\n");
  }
  WriteFileAtomic(
      (dir / ("blinding_" + std::to_string(sheets.seed) + ".json")).string(),
      BlindingToJson(sheets).dump(2) + "\n");
}

std::vector<Judgment> ParseJudgments(std::string_view contents,
                                     const std::string& source,
                                     const BlindingMap* blinding) {
  std::vector<Judgment> judgments;
  bool header_seen = false;
  size_t line_number = 0;
  size_t pos = 0;
  while (pos < contents.size()) {
    size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_number == 1 && line.starts_with("\xEF\xBB\xBF")) {
      line.remove_prefix(3);
    }
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    std::string where = source + ":" + std::to_string(line_number);
    std::vector<std::string> fields = SplitCsv(line, where);
    if (!header_seen) {
      const std::vector<std::string> expected = {
          "annotator", "item_id", "system_id", "dimension", "score"};
      if (fields != expected) {
        throw Error(ErrorKind::kInvalidJudgment,
                    where + ": expected header "
                            "annotator,item_id,system_id,dimension,score");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      throw Error(ErrorKind::kInvalidJudgment,
                  where + ": expected 5 fields, found " +
                      std::to_string(fields.size()));
    }
    Judgment j;
    j.annotator = fields[0];
    j.item_id = fields[1];
    j.system_id = fields[2];
    try {
      j.dimension = ParseDimension(fields[3]);
    } catch (const Error& e) {
      throw Error(ErrorKind::kInvalidJudgment, where + ": " + e.detail());
    }
    const std::string& score = fields[4];
    if (score.empty() || score.size() > 9 ||
        score.find_first_not_of("0123456789-") != std::string::npos ||
        score.find('-', 1) != std::string::npos || score == "-") {
      throw Error(ErrorKind::kInvalidJudgment,
                  where + ": score '" + score + "' is not an integer");
    }
    j.score = std::stoi(score);
    if (blinding) {
      auto item = blinding->find(j.item_id);
      if (item == blinding->end()) {
        throw Error(ErrorKind::kInvalidJudgment,
                    where + ": item '" + j.item_id + "' is not in the blinding map");
      }
      auto label = item->second.find(j.system_id);
      if (label == item->second.end()) {
        throw Error(ErrorKind::kInvalidJudgment,
                    where + ": label '" + j.system_id +
                        "' is not used for item '" + j.item_id + "'");
      }
      j.system_id = label->second;
    }
    judgments.push_back(std::move(j));
  }
  if (!header_seen) {
    throw Error(ErrorKind::kInvalidJudgment, source + ": no header row");
  }
  ValidateJudgments(judgments);
  return judgments;
}

std::vector<Judgment> LoadJudgments(const std::string& path,
                                    const BlindingMap* blinding) {
  return ParseJudgments(ReadFile(path), path, blinding);
}

void ValidateJudgments(std::span<const Judgment> judgments) {
  std::set<std::tuple<std::string, std::string, std::string, Dimension>> seen;
  for (const Judgment& j : judgments) {
    if (j.annotator.empty() || j.item_id.empty() || j.system_id.empty()) {
      throw Error(ErrorKind::kInvalidJudgment,
                  "empty field in judgment " + Describe(j));
    }
    if (j.score < 1 || j.score > 4) {
      throw Error(ErrorKind::kScoreOutOfRange,
                  "score " + std::to_string(j.score) + " in " + Describe(j));
    }
    if (j.dimension == Dimension::kAdequacy && j.system_id == kOriginalSystem) {
      throw Error(ErrorKind::kInvalidJudgment,
                  "originals are references and are not judged for adequacy");
    }
    if (!seen.emplace(j.annotator, j.item_id, j.system_id, j.dimension)
             .second) {
      throw Error(ErrorKind::kDuplicateJudgment, Describe(j));
    }
  }
}

std::vector<SystemScore> Aggregate(std::span<const Judgment> judgments) {
  ValidateJudgments(judgments);
  std::map<std::pair<Dimension, std::string>, SystemScore> totals;
  for (const Judgment& j : judgments) {
    SystemScore& s = totals[{j.dimension, j.system_id}];
    s.system_id = j.system_id;
    s.dimension = j.dimension;
    s.sum += j.score;
    ++s.count;
  }
  std::vector<SystemScore> scores;
  for (auto& [key, s] : totals) {
    s.mean = static_cast<double>(s.sum) / static_cast<double>(s.count);
    scores.push_back(s);
  }
  // Means compare exactly as sum_a * count_b against sum_b * count_a.
  auto higher = [](const SystemScore& a, const SystemScore& b) {
    return a.sum * static_cast<int64_t>(b.count) >
           b.sum * static_cast<int64_t>(a.count);
  };
  std::stable_sort(scores.begin(), scores.end(),
                   [&](const SystemScore& a, const SystemScore& b) {
                     if (a.dimension != b.dimension) {
                       return a.dimension < b.dimension;
                     }
                     return higher(a, b);
                   });
  for (size_t i = 0; i < scores.size(); ++i) {
    if (i == 0 || scores[i].dimension != scores[i - 1].dimension) {
      scores[i].rank = 1;
    } else if (higher(scores[i - 1], scores[i])) {
      scores[i].rank = scores[i - 1].rank + 1;
    } else {
      scores[i].rank = scores[i - 1].rank;
    }
  }
  return scores;
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    double rank = static_cast<double>(i + j + 2) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> SpearmanRho(std::span<const double> x,
                                  std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kUnpairedJudgments,
                "vectors differ in length: " + std::to_string(x.size()) +
                    " vs " + std::to_string(y.size()));
  }
  size_t n = x.size();
  if (n < 2) return std::nullopt;
  std::vector<double> rx = AverageRanks(x);
  std::vector<double> ry = AverageRanks(y);
  // Both rank vectors share the mean (n + 1) / 2.
  double mean = static_cast<double>(n + 1) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double dx = rx[i] - mean;
    double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  double rho = sxy / std::sqrt(sxx * syy);
  return std::clamp(rho, -1.0, 1.0);
}

std::map<Dimension, std::optional<double>> SpearmanIaa(
    std::span<const Judgment> judgments) {
  ValidateJudgments(judgments);
  using Key = std::tuple<Dimension, std::string, std::string>;
  std::map<Key, std::vector<const Judgment*>> groups;
  for (const Judgment& j : judgments) {
    groups[{j.dimension, j.item_id, j.system_id}].push_back(&j);
  }
  size_t unpaired = 0;
  for (const auto& [key, members] : groups) {
    if (members.size() != 2) ++unpaired;
  }
  if (unpaired > 0) {
    throw Error(ErrorKind::kUnpairedJudgments,
                std::to_string(unpaired) +
                    " judged (item, system, dimension) keys lack exactly two "
                    "annotators");
  }
  std::map<Dimension, std::pair<std::vector<double>, std::vector<double>>>
      vectors;
  for (const auto& [key, members] : groups) {
    const Judgment* a = members[0];
    const Judgment* b = members[1];
    if (b->annotator < a->annotator) std::swap(a, b);
    auto& [x, y] = vectors[std::get<0>(key)];
    x.push_back(a->score);
    y.push_back(b->score);
  }
  std::map<Dimension, std::optional<double>> result;
  for (const auto& [dimension, xy] : vectors) {
    result[dimension] = SpearmanRho(xy.first, xy.second);
  }
  return result;
}

}  // namespace tlab

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

#include "tlab/report.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "tlab/error.h"
#include "tlab/hash.h"

namespace tlab {
namespace {

constexpr const char* kCheck = " ✓";

void RequireSame(const std::string& what, const std::string& a,
                 const std::string& b, const MetricReport& left,
                 const MetricReport& right) {
  if (a != b) {
    throw Error(ErrorKind::kProvenanceMismatch,
                what + " differs between '" + left.corpus_name + "' (" + a +
                    ") and '" + right.corpus_name + "' (" + b + ")");
  }
}

void CheckTokenizer(const MetricReport& a, const MetricReport& b) {
  RequireSame("tokenizer", a.provenance.tokenizer_version,
              b.provenance.tokenizer_version, a, b);
}

void CheckLexicon(const MetricReport& a, const MetricReport& b) {
  RequireSame("lexicon", a.provenance.lexicon_hash, b.provenance.lexicon_hash,
              a, b);
}

void CheckTagger(const MetricReport& a, const MetricReport& b) {
  RequireSame("tagger", a.provenance.tagger, b.provenance.tagger, a, b);
}

const PosFrequencies& RequirePos(const MetricReport& report) {
  if (!report.pos_freq) {
    throw Error(ErrorKind::kInvalidConfig,
                "report '" + report.corpus_name + "' has no POS frequencies");
  }
  return *report.pos_freq;
}

std::string Fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

// Shortest text that reads back as the same double.
std::string Exact(double value) {
  char buffer[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

std::string Row(const std::vector<std::string>& cells) {
  std::string out = "|";
  for (const std::string& cell : cells) out += " " + cell + " |";
  return out + "\n";
}

std::string Rule(size_t columns) {
  std::string out = "|";
  for (size_t i = 0; i < columns; ++i) out += i == 0 ? "---|" : "---:|";
  return out + "\n";
}

// Dense ranks, highest value first.
std::map<std::string, int> RankDescending(
    const std::map<std::string, double>& values) {
  std::set<double, std::greater<>> distinct;
  for (const auto& [id, value] : values) distinct.insert(value);
  std::map<std::string, int> ranks;
  for (const auto& [id, value] : values) {
    ranks[id] = static_cast<int>(std::distance(distinct.begin(),
                                               distinct.find(value))) + 1;
  }
  return ranks;
}

}  // namespace

bool TtrImproved(const MetricReport& system, const MetricReport& baseline) {
  CheckTokenizer(system, baseline);
  return system.ttr > baseline.ttr;
}

bool CohesiveImproved(const MetricReport& system,
                      const MetricReport& baseline) {
  CheckTokenizer(system, baseline);
  CheckLexicon(system, baseline);
  return system.cohesive_count < baseline.cohesive_count;
}

std::map<PosTag, bool> PosCloseness(const MetricReport& system,
                                    const MetricReport& baseline,
                                    const MetricReport& original,
                                    std::span<const PosTag> tags) {
  CheckTagger(system, baseline);
  CheckTagger(original, baseline);
  CheckTokenizer(system, baseline);
  CheckTokenizer(original, baseline);
  const PosFrequencies& sys = RequirePos(system);
  const PosFrequencies& base = RequirePos(baseline);
  const PosFrequencies& orig = RequirePos(original);
  std::map<PosTag, bool> closer;
  for (PosTag tag : tags) {
    size_t t = static_cast<size_t>(tag);
    closer[tag] = std::fabs(sys[t] - orig[t]) < std::fabs(base[t] - orig[t]);
  }
  return closer;
}

void ValidateComparison(const Comparison& comparison) {
  const MetricReport& base = comparison.baseline;
  auto check = [&](const MetricReport& other) {
    CheckTokenizer(other, base);
    CheckLexicon(other, base);
    if (other.pos_freq && base.pos_freq) CheckTagger(other, base);
  };
  if (comparison.original) check(*comparison.original);
  for (const auto& [id, report] : comparison.systems) check(report);
}

ReportDocuments RenderComparison(const Comparison& comparison,
                                 const RenderOptions& options) {
  ValidateComparison(comparison);
  const MetricReport& base = comparison.baseline;
  const MetricReport* orig =
      comparison.original ? &*comparison.original : nullptr;
  bool with_pos = orig && orig->pos_freq && base.pos_freq &&
                  !options.tags.empty();
  for (const auto& [id, report] : comparison.systems) {
    with_pos = with_pos && report.pos_freq.has_value();
  }

  ReportDocuments docs;
  nlohmann::ordered_json json;
  std::string& md = docs.markdown;

  md += "# Translationese comparison\n\n";
  md += "## Lexical richness and cohesive markers\n\n";
  md += Row({"Corpus", "TTR (↑)", "Cohesive markers (↓)",
             "Avg. sentence length"});
  md += Rule(4);
  auto plain_row = [&](const std::string& label, const MetricReport& r) {
    md += Row({label, Fixed(r.ttr, 4), std::to_string(r.cohesive_count),
               Fixed(r.avg_sentence_length, 2)});
  };
  plain_row("Translations (baseline)", base);
  if (orig) plain_row("Originally written", *orig);

  json["baseline"] = ToJson(base);
  json["original"] = orig ? ToJson(*orig) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json systems = nlohmann::ordered_json::object();
  for (const auto& [id, report] : comparison.systems) {
    bool ttr = TtrImproved(report, base);
    bool cohesive = CohesiveImproved(report, base);
    md += Row({id, Fixed(report.ttr, 4) + (ttr ? kCheck : ""),
               std::to_string(report.cohesive_count) + (cohesive ? kCheck : ""),
               Fixed(report.avg_sentence_length, 2)});
    nlohmann::ordered_json entry;
    entry["ttr_improved"] = ttr;
    entry["cohesive_improved"] = cohesive;
    if (with_pos) {
      nlohmann::ordered_json closer = nlohmann::ordered_json::object();
      for (const auto& [tag, value] :
           PosCloseness(report, base, *orig, options.tags)) {
        closer[std::string(TagName(tag))] = value;
      }
      entry["pos_closer"] = std::move(closer);
    }
    entry["report"] = ToJson(report);
    systems[id] = std::move(entry);
  }
  json["systems"] = std::move(systems);

  if (with_pos) {
    md += "\n## Part-of-speech frequencies\n\n";
    md += "A check marks a system frequency closer to the originally written "
          "text than the baseline.\n\n";
    std::vector<std::string> header = {"Corpus"};
    for (PosTag tag : options.tags) header.emplace_back(TagName(tag));
    md += Row(header);
    md += Rule(header.size());
    auto freq_row = [&](const std::string& label, const MetricReport& r,
                        const std::map<PosTag, bool>* closer) {
      std::vector<std::string> cells = {label};
      for (PosTag tag : options.tags) {
        std::string cell = Fixed((*r.pos_freq)[static_cast<size_t>(tag)], 4);
        if (closer && closer->at(tag)) cell += kCheck;
        cells.push_back(cell);
      }
      md += Row(cells);
    };
    freq_row("Translations (baseline)", base, nullptr);
    freq_row("Originally written", *orig, nullptr);
    for (const auto& [id, report] : comparison.systems) {
      std::map<PosTag, bool> closer =
          PosCloseness(report, base, *orig, options.tags);
      freq_row(id, report, &closer);
    }
  }

  if (options.similarity) {
    std::set<std::string> metrics;
    for (const auto& [id, scores] : *options.similarity) {
      for (const auto& [metric, value] : scores) metrics.insert(metric);
    }
    std::map<std::string, std::map<std::string, int>> ranks;
    for (const std::string& metric : metrics) {
      std::map<std::string, double> column;
      for (const auto& [id, scores] : *options.similarity) {
        if (auto it = scores.find(metric); it != scores.end()) {
          column[id] = it->second;
        }
      }
      ranks[metric] = RankDescending(column);
    }
    md += "\n## Similarity to the input\n\n";
    std::vector<std::string> header = {"System"};
    header.insert(header.end(), metrics.begin(), metrics.end());
    md += Row(header);
    md += Rule(header.size());
    nlohmann::ordered_json similarity = nlohmann::ordered_json::object();
    for (const auto& [id, scores] : *options.similarity) {
      std::vector<std::string> cells = {id};
      nlohmann::ordered_json entry = nlohmann::ordered_json::object();
      for (const std::string& metric : metrics) {
        auto it = scores.find(metric);
        if (it == scores.end()) {
          cells.emplace_back("-");
          continue;
        }
        int rank = ranks[metric].at(id);
        cells.push_back(Fixed(it->second, 2) + " (" + std::to_string(rank) +
                        ")");
        entry[metric] = {{"score", it->second}, {"rank", rank}};
      }
      md += Row(cells);
      similarity[id] = std::move(entry);
    }
    json["similarity"] = std::move(similarity);
  }

  const Provenance& p = base.provenance;
  std::map<std::string, std::string> backends;
  for (const auto& [id, report] : comparison.systems) {
    for (const auto& [backend, version] : report.provenance.backend_versions) {
      backends[backend] = version;
    }
  }
  md += "\n## Provenance\n\n";
  md += "- tokenizer: " + p.tokenizer_version + "\n";
  md += "- tagger: " + (p.tagger.empty() ? std::string("none") : p.tagger) +
        "\n";
  md += "- lexicon: " + p.lexicon_source + " (" + p.lexicon_hash + ")\n";
  if (p.seed) md += "- seed: " + std::to_string(*p.seed) + "\n";
  for (const auto& [backend, version] : backends) {
    md += "- backend " + backend + ": " + version + "\n";
  }
  nlohmann::ordered_json provenance = ToJson(p);
  provenance["backend_versions"] = backends;
  json["provenance"] = std::move(provenance);
  docs.json = json.dump(2) + "\n";

  std::string& tsv = docs.tsv;
  tsv = "corpus\tkind\tsentences\ttokens\ttypes\tttr\tcohesive_count\t"
        "avg_sentence_length\tttr_improved\tcohesive_improved";
  for (size_t t = 0; t < kNumTags; ++t) {
    tsv += "\t" + std::string(TagName(static_cast<PosTag>(t)));
  }
  tsv += "\n";
  auto tsv_row = [&](const std::string& label, const std::string& kind,
                     const MetricReport& r, const std::string& ttr,
                     const std::string& cohesive) {
    tsv += label + "\t" + kind + "\t" + std::to_string(r.sentence_count) +
           "\t" + std::to_string(r.token_count) + "\t" +
           std::to_string(r.type_count) + "\t" + Exact(r.ttr) + "\t" +
           std::to_string(r.cohesive_count) + "\t" +
           Exact(r.avg_sentence_length) + "\t" + ttr + "\t" + cohesive;
    for (size_t t = 0; t < kNumTags; ++t) {
      tsv += "\t" + (r.pos_freq ? Exact((*r.pos_freq)[t]) : std::string());
    }
    tsv += "\n";
  };
  tsv_row(base.corpus_name, "baseline", base, "", "");
  if (orig) tsv_row(orig->corpus_name, "original", *orig, "", "");
  for (const auto& [id, report] : comparison.systems) {
    tsv_row(id, "system", report, TtrImproved(report, base) ? "1" : "0",
            CohesiveImproved(report, base) ? "1" : "0");
  }
  return docs;
}

void WriteReport(const ReportDocuments& documents,
                 const std::string& directory) {
  std::filesystem::path dir(directory);
  WriteFileAtomic((dir / "report.md").string(), documents.markdown);
  WriteFileAtomic((dir / "report.json").string(), documents.json);
  WriteFileAtomic((dir / "report.tsv").string(), documents.tsv);
}

SimilarityTable SimilarityFromJson(const nlohmann::json& json) {
  const nlohmann::json& systems =
      json.is_object() && json.contains("systems") ? json["systems"] : json;
  if (!systems.is_object()) {
    throw Error(ErrorKind::kInvalidConfig,
                "similarity scores must be a JSON object keyed by system");
  }
  SimilarityTable table;
  for (const auto& [id, scores] : systems.items()) {
    if (!scores.is_object()) {
      throw Error(ErrorKind::kInvalidConfig,
                  "similarity scores for '" + id + "' are not an object");
    }
    for (const auto& [metric, value] : scores.items()) {
      if (!value.is_number()) {
        throw Error(ErrorKind::kInvalidConfig, "similarity score " + id + "." +
                                                   metric + " is not a number");
      }
      table[id][metric] = value.get<double>();
    }
  }
  return table;
}

SimilarityTable LoadSimilarity(const std::string& path) {
  try {
    return SimilarityFromJson(nlohmann::json::parse(ReadFile(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidConfig, path + ": " + e.what());
  }
}

std::string RenderEvalTable(
    std::span<const SystemScore> scores,
    const std::map<Dimension, std::optional<double>>* iaa) {
  std::map<std::string, std::map<Dimension, const SystemScore*>> rows;
  for (const SystemScore& s : scores) rows[s.system_id][s.dimension] = &s;
  std::string md = Row({"System", "Adequacy", "Fluency"}) + Rule(3);
  auto cell = [](const std::map<Dimension, const SystemScore*>& row,
                 Dimension dimension) -> std::string {
    auto it = row.find(dimension);
    if (it == row.end()) return "-";
    return Fixed(it->second->mean, 2) + " (" +
           std::to_string(it->second->rank) + ")";
  };
  auto emit = [&](const std::string& id) {
    const auto& row = rows.at(id);
    md += Row({id, cell(row, Dimension::kAdequacy),
               cell(row, Dimension::kFluency)});
  };
  for (const auto& [id, row] : rows) {
    if (id != kOriginalSystem) emit(id);
  }
  if (rows.contains(std::string(kOriginalSystem))) {
    emit(std::string(kOriginalSystem));
  }
  if (iaa) {
    md += "\nSpearman inter-annotator agreement:";
    for (const auto& [dimension, rho] : *iaa) {
      md += " " + std::string(DimensionName(dimension)) + " " +
            (rho ? Fixed(*rho, 2) : std::string("undefined")) + ";";
    }
    md.back() = '\n';
  }
  return md;
}

nlohmann::ordered_json EvalToJson(
    std::span<const SystemScore> scores,
    const std::map<Dimension, std::optional<double>>* iaa) {
  nlohmann::ordered_json out;
  out["scores"] = nlohmann::ordered_json::array();
  for (const SystemScore& s : scores) {
    out["scores"].push_back({{"system_id", s.system_id},
                             {"dimension", DimensionName(s.dimension)},
                             {"count", s.count},
                             {"sum", s.sum},
                             {"mean", s.mean},
                             {"rank", s.rank}});
  }
  if (iaa) {
    nlohmann::ordered_json agreement = nlohmann::ordered_json::object();
    for (const auto& [dimension, rho] : *iaa) {
      agreement[std::string(DimensionName(dimension))] =
          rho ? nlohmann::ordered_json(*rho) : nlohmann::ordered_json(nullptr);
    }
    out["spearman_iaa"] = std::move(agreement);
  }
  return out;
}

}  // namespace tlab

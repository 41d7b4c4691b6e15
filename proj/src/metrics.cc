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

#include "tlab/metrics.h"

#include "tlab/error.h"
#include "tlab/hash.h"

namespace tlab {

using nlohmann::json;
using nlohmann::ordered_json;

TtrResult ComputeTtr(std::span<const TokenizedSentence> corpus,
                     Execution execution) {
  TtrResult result;
  if (execution == Execution::kSerial) {
    result.token_count = serial::CountTokens(corpus);
    result.type_count = serial::CountTypes(corpus);
  } else {
    result.token_count = parallel::CountTokens(corpus);
    result.type_count = parallel::CountTypes(corpus);
  }
  if (result.token_count == 0) {
    throw Error(ErrorKind::kEmptyCorpus, "no tokens to compute TTR over");
  }
  result.ttr = static_cast<double>(result.type_count) /
               static_cast<double>(result.token_count);
  return result;
}

CohesiveCounts CountCohesive(std::span<const TokenizedSentence> corpus,
                             const MarkerLexicon& lexicon,
                             Execution execution) {
  return execution == Execution::kSerial
             ? serial::CountCohesive(corpus, lexicon)
             : parallel::CountCohesive(corpus, lexicon);
}

PosFrequencies ComputePosFrequencies(std::span<const TaggedSentence> corpus,
                                     Execution execution) {
  TagCounts counts = execution == Execution::kSerial
                         ? serial::CountTags(corpus)
                         : parallel::CountTags(corpus);
  size_t total = 0;
  for (size_t c : counts) total += c;
  if (total == 0) throw Error(ErrorKind::kEmptyCorpus, "no tagged tokens");
  PosFrequencies freq{};
  for (size_t t = 0; t < kNumTags; ++t) {
    freq[t] = static_cast<double>(counts[t]) / static_cast<double>(total);
  }
  return freq;
}

LengthStats ComputeLengthStats(std::span<const TokenizedSentence> corpus) {
  if (corpus.empty()) throw Error(ErrorKind::kEmptyCorpus, "no sentences");
  LengthStats stats;
  stats.sentence_count = corpus.size();
  stats.token_count = serial::CountTokens(corpus);
  stats.avg_sentence_length = static_cast<double>(stats.token_count) /
                              static_cast<double>(stats.sentence_count);
  return stats;
}

MetricReport BuildMetricReport(std::string corpus_name,
                               std::span<const TokenizedSentence> corpus,
                               const MarkerLexicon& lexicon,
                               std::span<const TaggedSentence> tagged,
                               Provenance provenance) {
  MetricReport report;
  report.corpus_name = std::move(corpus_name);
  TtrResult ttr = ComputeTtr(corpus);
  LengthStats length = ComputeLengthStats(corpus);
  CohesiveCounts cohesive = CountCohesive(corpus, lexicon);
  report.sentence_count = length.sentence_count;
  report.token_count = ttr.token_count;
  report.type_count = ttr.type_count;
  report.ttr = ttr.ttr;
  report.avg_sentence_length = length.avg_sentence_length;
  report.cohesive_count = cohesive.total;
  for (size_t m = 0; m < cohesive.per_marker.size(); ++m) {
    if (cohesive.per_marker[m] > 0) {
      report.cohesive_breakdown.emplace(lexicon.MarkerText(m),
                                        cohesive.per_marker[m]);
    }
  }
  if (!tagged.empty()) {
    report.pos_freq = ComputePosFrequencies(tagged);
    for (const TaggedSentence& s : tagged) report.pos_token_count += s.tags.size();
  }
  provenance.tokenizer_version = std::string(kTokenizerVersion);
  provenance.lexicon_source = lexicon.source();
  provenance.lexicon_hash = lexicon.hash();
  report.provenance = std::move(provenance);
  return report;
}

ordered_json ToJson(const Provenance& provenance) {
  ordered_json out;
  out["tokenizer_version"] = provenance.tokenizer_version;
  out["tagger"] = provenance.tagger;
  out["lexicon_source"] = provenance.lexicon_source;
  out["lexicon_hash"] = provenance.lexicon_hash;
  out["seed"] = provenance.seed ? ordered_json(*provenance.seed)
                                : ordered_json(nullptr);
  out["backend_versions"] = ordered_json::object();
  for (const auto& [id, version] : provenance.backend_versions) {
    out["backend_versions"][id] = version;
  }
  return out;
}

Provenance ProvenanceFromJson(const json& in) {
  try {
    Provenance provenance;
    provenance.tokenizer_version = in.at("tokenizer_version").get<std::string>();
    provenance.tagger = in.value("tagger", std::string());
    provenance.lexicon_source = in.at("lexicon_source").get<std::string>();
    provenance.lexicon_hash = in.at("lexicon_hash").get<std::string>();
    if (in.contains("seed") && !in["seed"].is_null()) {
      provenance.seed = in["seed"].get<uint64_t>();
    }
    if (in.contains("backend_versions")) {
      provenance.backend_versions =
          in["backend_versions"].get<std::map<std::string, std::string>>();
    }
    return provenance;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidConfig,
                std::string("provenance block: ") + e.what());
  }
}

ordered_json ToJson(const MetricReport& report) {
  ordered_json out;
  out["corpus_name"] = report.corpus_name;
  out["sentence_count"] = report.sentence_count;
  out["token_count"] = report.token_count;
  out["type_count"] = report.type_count;
  out["ttr"] = report.ttr;
  out["cohesive_count"] = report.cohesive_count;
  out["cohesive_breakdown"] = ordered_json::object();
  for (const auto& [marker, count] : report.cohesive_breakdown) {
    out["cohesive_breakdown"][marker] = count;
  }
  if (report.pos_freq) {
    ordered_json freq = ordered_json::object();
    for (size_t t = 0; t < kNumTags; ++t) {
      freq[std::string(TagName(static_cast<PosTag>(t)))] = (*report.pos_freq)[t];
    }
    out["pos_freq"] = std::move(freq);
  } else {
    out["pos_freq"] = nullptr;
  }
  out["pos_token_count"] = report.pos_token_count;
  out["avg_sentence_length"] = report.avg_sentence_length;
  out["provenance"] = ToJson(report.provenance);
  return out;
}

MetricReport MetricReportFromJson(const json& in) {
  try {
    MetricReport report;
    report.corpus_name = in.at("corpus_name").get<std::string>();
    report.sentence_count = in.at("sentence_count").get<size_t>();
    report.token_count = in.at("token_count").get<size_t>();
    report.type_count = in.at("type_count").get<size_t>();
    report.ttr = in.at("ttr").get<double>();
    report.cohesive_count = in.at("cohesive_count").get<size_t>();
    if (in.contains("cohesive_breakdown")) {
      report.cohesive_breakdown =
          in["cohesive_breakdown"].get<std::map<std::string, size_t>>();
    }
    if (in.contains("pos_freq") && !in["pos_freq"].is_null()) {
      PosFrequencies freq{};
      for (const auto& [name, value] : in["pos_freq"].items()) {
        PosTag tag = ParseTagOrThrow(name, "pos_freq");
        freq[static_cast<size_t>(tag)] = value.get<double>();
      }
      report.pos_freq = freq;
    }
    report.pos_token_count = in.value("pos_token_count", size_t{0});
    report.avg_sentence_length = in.at("avg_sentence_length").get<double>();
    report.provenance = ProvenanceFromJson(in.at("provenance"));
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidConfig,
                std::string("metric report: ") + e.what());
  }
}

MetricReport LoadMetricReport(const std::string& path) {
  std::string text = ReadFile(path);
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    throw Error(ErrorKind::kInvalidConfig, path + " is not valid JSON");
  }
  return MetricReportFromJson(parsed);
}

}  // namespace tlab

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

#include <gtest/gtest.h>

#include "support/test_support.h"
#include "tlab/error.h"

namespace tlab {
namespace {

using testing::FixtureReport;

const std::vector<PosTag> kTags = {PosTag::kAdp, PosTag::kAdv, PosTag::kDet};

TEST(TtrImprovedTest, StrictIncrease) {
  MetricReport base = FixtureReport("t", 0.0890, 461);
  EXPECT_TRUE(TtrImproved(FixtureReport("amr", 0.1002, 348), base));
  EXPECT_FALSE(TtrImproved(FixtureReport("mt", 0.0850, 483), base));
  EXPECT_FALSE(TtrImproved(base, base));
}

TEST(CohesiveImprovedTest, StrictDecrease) {
  MetricReport base = FixtureReport("t", 0.0890, 461);
  EXPECT_TRUE(CohesiveImproved(FixtureReport("amr", 0.1002, 348), base));
  EXPECT_FALSE(CohesiveImproved(FixtureReport("mt", 0.0850, 483), base));
  EXPECT_TRUE(CohesiveImproved(FixtureReport("t5", 0.0736, 446), base));
  EXPECT_FALSE(CohesiveImproved(base, base));
}

TEST(ProvenanceTest, MismatchesAreRefused) {
  MetricReport base = FixtureReport("t", 0.0890, 461);
  MetricReport other = FixtureReport("s", 0.1, 400);
  other.provenance.tokenizer_version = "something-else";
  try {
    TtrImproved(other, base);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kProvenanceMismatch);
  }
  other = FixtureReport("s", 0.1, 400);
  other.provenance.lexicon_hash = "other";
  EXPECT_THROW(CohesiveImproved(other, base), Error);
  EXPECT_NO_THROW(TtrImproved(other, base));

  MetricReport orig = FixtureReport("o", 0.1, 1, 0.1108, 0.0389, 0.0984);
  MetricReport sys = FixtureReport("s", 0.1, 1, 0.1103, 0.0419, 0.0963);
  MetricReport tbase = FixtureReport("t", 0.1, 1, 0.1129, 0.0433, 0.0982);
  sys.provenance.tagger = "model:abc";
  EXPECT_THROW(PosCloseness(sys, tbase, orig, kTags), Error);
}

TEST(PosClosenessTest, Rule) {
  MetricReport base = FixtureReport("t", 0.1, 1, 0.1129, 0.0433, 0.0982);
  MetricReport orig = FixtureReport("o", 0.1, 1, 0.1108, 0.0389, 0.0984);
  auto amr = PosCloseness(FixtureReport("amr", 0.1, 1, 0.1103, 0.0419, 0.0963),
                          base, orig, kTags);
  EXPECT_TRUE(amr.at(PosTag::kAdp));
  EXPECT_TRUE(amr.at(PosTag::kAdv));
  EXPECT_FALSE(amr.at(PosTag::kDet));
  auto mt = PosCloseness(FixtureReport("mt", 0.1, 1, 0.1144, 0.0413, 0.1004),
                         base, orig, kTags);
  EXPECT_FALSE(mt.at(PosTag::kAdp));
  EXPECT_FALSE(mt.at(PosTag::kDet));
  // Landing exactly on the original is closer whenever the baseline is not.
  auto exact = PosCloseness(orig, base, orig, kTags);
  EXPECT_TRUE(exact.at(PosTag::kAdp));
  EXPECT_FALSE(PosCloseness(orig, orig, orig, kTags).at(PosTag::kAdp));
  MetricReport untagged = FixtureReport("u", 0.1, 1);
  EXPECT_THROW(PosCloseness(untagged, base, orig, kTags), Error);
}

Comparison SampleComparison() {
  Comparison c;
  c.baseline = FixtureReport("translations", 0.0890, 461, 0.1129, 0.0433, 0.0982);
  c.original = FixtureReport("original", 0.0950, 400, 0.1108, 0.0389, 0.0984);
  c.systems["amr"] = FixtureReport("amr", 0.1002, 348, 0.1103, 0.0419, 0.0963);
  c.systems["mt"] = FixtureReport("mt", 0.0850, 483, 0.1144, 0.0413, 0.1004);
  return c;
}

TEST(RenderTest, TablesAndJson) {
  Comparison c = SampleComparison();
  c.systems["amr"].provenance.backend_versions["amr"] = "2.1";
  ReportDocuments docs = RenderComparison(c);
  EXPECT_NE(docs.markdown.find("| amr | 0.1002 ✓ | 348 ✓ |"), std::string::npos)
      << docs.markdown;
  EXPECT_NE(docs.markdown.find("| mt | 0.0850 | 483 |"), std::string::npos);
  EXPECT_NE(docs.markdown.find("TTR (↑)"), std::string::npos);
  EXPECT_NE(docs.markdown.find("Cohesive markers (↓)"), std::string::npos);
  EXPECT_NE(docs.markdown.find("| amr | 0.1103 ✓ | 0.0419 ✓ | 0.0963 |"),
            std::string::npos);
  EXPECT_NE(docs.markdown.find("backend amr: 2.1"), std::string::npos);

  nlohmann::json j = nlohmann::json::parse(docs.json);
  EXPECT_EQ(j["systems"]["amr"]["ttr_improved"], true);
  EXPECT_EQ(j["systems"]["mt"]["cohesive_improved"], false);
  EXPECT_EQ(j["systems"]["mt"]["pos_closer"]["ADP"], false);
  EXPECT_EQ(j["systems"]["amr"]["report"]["ttr"].get<double>(), 0.1002);
  EXPECT_EQ(j["provenance"]["backend_versions"]["amr"], "2.1");
  EXPECT_EQ(j["baseline"]["pos_freq"]["ADV"].get<double>(), 0.0433);

  EXPECT_EQ(docs.tsv.substr(0, docs.tsv.find('\n')).find("corpus\tkind"), 0u);
  EXPECT_NE(docs.tsv.find("amr\tsystem\t0\t0\t0\t0.1002\t348\t0\t1\t1\t"),
            std::string::npos) << docs.tsv;
}

TEST(RenderTest, ByteStable) {
  ReportDocuments a = RenderComparison(SampleComparison());
  ReportDocuments b = RenderComparison(SampleComparison());
  EXPECT_EQ(a.markdown, b.markdown);
  EXPECT_EQ(a.json, b.json);
  EXPECT_EQ(a.tsv, b.tsv);
  testing::TempDir dir;
  WriteReport(a, dir.path());
  EXPECT_EQ(testing::ReadText(dir.Join("report.json")), a.json);
  EXPECT_EQ(testing::ReadText(dir.Join("report.md")), a.markdown);
}

TEST(RenderTest, SingleSystemWithoutOriginal) {
  Comparison c;
  c.baseline = FixtureReport("t", 0.0890, 461);
  c.systems["bart"] = FixtureReport("bart", 0.1172, 277);
  ReportDocuments docs = RenderComparison(c);
  EXPECT_NE(docs.markdown.find("| bart | 0.1172 ✓ | 277 ✓ |"), std::string::npos);
  EXPECT_EQ(docs.markdown.find("Part-of-speech"), std::string::npos);
  EXPECT_TRUE(nlohmann::json::parse(docs.json)["original"].is_null());
}

TEST(RenderTest, RefusesMixedProvenance) {
  Comparison c = SampleComparison();
  c.systems["mt"].provenance.lexicon_hash = "other";
  try {
    RenderComparison(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kProvenanceMismatch);
  }
}

TEST(SimilarityTest, AuxiliaryTable) {
  SimilarityTable table = SimilarityFromJson(nlohmann::json::parse(R"({
    "systems": {
      "amr": {"bleurt": 75.81, "comet": 84.95, "bertscore": 94.89},
      "mt": {"bleurt": 80.0, "comet": 84.95, "bertscore": 90.0}
    }})"));
  RenderOptions options;
  options.similarity = table;
  ReportDocuments docs = RenderComparison(SampleComparison(), options);
  EXPECT_NE(docs.markdown.find("| amr | 94.89 (1) | 75.81 (2) | 84.95 (1) |"),
            std::string::npos) << docs.markdown;
  nlohmann::json j = nlohmann::json::parse(docs.json);
  EXPECT_EQ(j["similarity"]["mt"]["bleurt"]["rank"], 1);
  EXPECT_THROW(SimilarityFromJson(nlohmann::json::parse(R"({"amr": 3})")), Error);
  EXPECT_THROW(
      SimilarityFromJson(nlohmann::json::parse(R"({"amr": {"bleurt": "x"}})")),
      Error);
}

TEST(EvalTableTest, RanksInParentheses) {
  std::vector<SystemScore> scores = {
      {"mt", Dimension::kAdequacy, 359, 100, 3.59, 1},
      {"mt", Dimension::kFluency, 335, 100, 3.35, 1},
      {"original", Dimension::kFluency, 319, 100, 3.19, 2},
  };
  std::map<Dimension, std::optional<double>> iaa = {
      {Dimension::kAdequacy, 0.5}, {Dimension::kFluency, std::nullopt}};
  std::string md = RenderEvalTable(scores, &iaa);
  EXPECT_NE(md.find("| mt | 3.59 (1) | 3.35 (1) |"), std::string::npos) << md;
  EXPECT_NE(md.find("| original | - | 3.19 (2) |"), std::string::npos);
  EXPECT_NE(md.find("adequacy 0.50; fluency undefined"), std::string::npos);
  nlohmann::ordered_json j = EvalToJson(scores, &iaa);
  EXPECT_EQ(j["scores"][0]["rank"], 1);
  EXPECT_TRUE(j["spearman_iaa"]["fluency"].is_null());
}

}  // namespace
}  // namespace tlab

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

#include "tlab/pipeline.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "support/test_support.h"
#include "tlab/error.h"
#include "tlab/penman.h"

namespace tlab {
namespace {

constexpr char kThree[] =
    "s1\tThe first sentence is here .\n"
    "s2\tAnother one follows it .\n"
    "s3\tAnd a third closes .\n";

class PipelineTest : public ::testing::Test {
 protected:
  BackendSpec Spec(const std::string& flags, double timeout = 10,
                   size_t batch = 2, size_t in_flight = 2) {
    BackendSpec spec;
    spec.id = "echo";
    spec.command = testing::ShellQuote(testing::EchoWorkerPath()) +
                   " --id echo --log " + testing::ShellQuote(Log()) +
                   " --state-dir " + testing::ShellQuote(dir_.Join("state")) +
                   " " + flags;
    spec.timeout_seconds = timeout;
    spec.batch_size = batch;
    spec.max_in_flight = in_flight;
    return spec;
  }

  PipelineResult Run(const Corpus& input, const BackendSpec& spec,
                     const PipelineOptions& options = {}) {
    auto transport = MakeTransport(spec);
    return RunPipeline(input, spec, cache_, *transport, options);
  }

  std::string Log() const { return dir_.Join("worker.log"); }
  size_t Dispatches() const {
    if (!std::filesystem::exists(Log())) return 0;
    std::string log = testing::ReadText(Log());
    return static_cast<size_t>(std::count(log.begin(), log.end(), '\n'));
  }
  void ClearLog() { std::filesystem::remove(Log()); }

  static Corpus Input(std::string_view text = kThree) {
    return ParseCorpus(text, CorpusRole::kTranslation, "input");
  }

  testing::TempDir dir_;
  ResponseCache cache_{dir_.Join("cache")};
};

TEST_F(PipelineTest, IdentityBackendThenFullCacheRerun) {
  Corpus input = Input();
  PipelineResult first = Run(input, Spec(""));
  EXPECT_EQ(first.output.sentences, input.sentences);
  EXPECT_EQ(first.output.role, CorpusRole::kSystemOutput);
  EXPECT_EQ(first.output.system_id, "echo");
  EXPECT_EQ(first.records.size(), 3u);
  EXPECT_EQ(first.cache_hits, 0u);
  EXPECT_EQ(first.backend_version, "1.0");
  EXPECT_TRUE(first.failed.empty());
  EXPECT_EQ(Dispatches(), 3u);
  for (const ReductionRecord& r : first.records) {
    EXPECT_FALSE(r.cache_hit);
    EXPECT_EQ(r.attempts, 1);
    EXPECT_EQ(r.backend_id, "echo");
  }

  ClearLog();
  PipelineResult second = Run(input, Spec(""));
  EXPECT_EQ(second.cache_hits, 3u);
  EXPECT_EQ(second.dispatched, 0u);
  EXPECT_EQ(Dispatches(), 0u);
  EXPECT_EQ(second.output.sentences, first.output.sentences);
  for (const ReductionRecord& r : second.records) EXPECT_TRUE(r.cache_hit);
}

TEST_F(PipelineTest, OutOfOrderRepliesKeepInputOrder) {
  Corpus input = Input(
      "a\tone .\nb\ttwo .\nc\tthree .\nd\tfour .\ne\tfive .\n");
  PipelineResult r = Run(input, Spec("--reverse --transform upper", 10, 3, 2));
  ASSERT_EQ(r.output.size(), 5u);
  EXPECT_EQ(r.output.Ids(), input.Ids());
  EXPECT_EQ(r.output.sentences[2].text, "THREE .");
  EXPECT_EQ(r.records[4].input_text, "five .");
}

TEST_F(PipelineTest, IdenticalTextsDispatchOnce) {
  PipelineResult r = Run(Input("a\tsame .\nb\tsame .\nc\tother .\n"), Spec(""));
  EXPECT_EQ(r.dispatched, 2u);
  EXPECT_EQ(Dispatches(), 2u);
  EXPECT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.records[1].id, "b");
  EXPECT_EQ(r.records[1].output_text, "same .");
}

TEST_F(PipelineTest, PersistentFailureIsListed) {
  Corpus input = Input();
  PipelineResult r = Run(input, Spec("--fail-id s2"));
  ASSERT_EQ(r.failed.size(), 1u);
  EXPECT_EQ(r.failed[0].id, "s2");
  EXPECT_NE(r.failed[0].reason.find("scripted failure"), std::string::npos);
  EXPECT_EQ(r.output.Ids(), (std::vector<std::string>{"s1", "s3"}));
  // One try plus two retries.
  EXPECT_EQ(Dispatches(), 5u);
  std::set<std::string> all;
  for (const Sentence& s : r.output.sentences) all.insert(s.id);
  for (const FailedSentence& f : r.failed) EXPECT_TRUE(all.insert(f.id).second);
  EXPECT_EQ(all.size(), input.size());
}

TEST_F(PipelineTest, TransientFailureRetries) {
  PipelineResult r = Run(Input(), Spec("--fail-once-id s1"));
  EXPECT_TRUE(r.failed.empty());
  EXPECT_EQ(r.records[0].attempts, 2);
  EXPECT_EQ(r.records[1].attempts, 1);
}

TEST_F(PipelineTest, BatchTimeoutRestartsWorker) {
  PipelineResult r = Run(Input(), Spec("--hang-once-id s1", 0.5, 1, 1));
  EXPECT_TRUE(r.failed.empty());
  EXPECT_EQ(r.output.sentences, Input().sentences);
  EXPECT_EQ(r.records[0].attempts, 2);
}

TEST_F(PipelineTest, PersistentHangFailsWithBatchTimeout) {
  BackendSpec spec = Spec("--hang-id s3", 0.3, 1, 2);
  spec.max_retries = 1;
  PipelineResult r = Run(Input(), spec);
  ASSERT_EQ(r.failed.size(), 1u);
  EXPECT_EQ(r.failed[0].id, "s3");
  EXPECT_NE(r.failed[0].reason.find("BatchTimeout"), std::string::npos);
  EXPECT_EQ(r.output.size(), 2u);
}

TEST_F(PipelineTest, WorkerCrashIsRecovered) {
  PipelineResult r = Run(Input(), Spec("--crash-after 1 --crash-once", 10, 1, 1));
  EXPECT_TRUE(r.failed.empty());
  EXPECT_EQ(r.output.sentences, Input().sentences);
}

TEST_F(PipelineTest, HandshakeMustNameTheBackend) {
  BackendSpec spec = Spec("");
  spec.id = "amr-ptg";
  try {
    Run(Input(), spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kProtocolViolation);
  }
}

TEST_F(PipelineTest, UnreachableBackend) {
  BackendSpec spec = Spec("");
  spec.command = "/nonexistent/worker";
  try {
    Run(Input(), spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBackendUnavailable);
  }
}

TEST_F(PipelineTest, ContrastIntermediate) {
  Corpus input = ParseCorpus(std::string("contrast\t") + testing::kContrastSentence,
                             CorpusRole::kTranslation, "input");
  PipelineResult r = Run(input, Spec("--intermediate contrast --transform drop-first"));
  ASSERT_EQ(r.records.size(), 1u);
  const ReductionRecord& rec = r.records[0];
  ASSERT_TRUE(rec.intermediate);
  AmrGraph g = ParsePenman(*rec.intermediate);
  EXPECT_EQ(g.nodes.size(), 12u);
  EXPECT_EQ(g.FindNode(g.root)->concept_label, "contrast-01");
  EXPECT_TRUE(rec.warnings.empty());
  EXPECT_NE(rec.output_text, rec.input_text);
}

TEST_F(PipelineTest, NormalizedIntermediate) {
  Corpus input = ParseCorpus(std::string("contrast\t") + testing::kContrastSentence,
                             CorpusRole::kTranslation, "input");
  PipelineOptions options;
  options.normalize_intermediate = true;
  PipelineResult r = Run(input, Spec("--intermediate contrast"), options);
  std::string text = *r.records[0].intermediate;
  AmrGraph normalized = NormalizeInverseRoles(ParsePenman(testing::kContrastAmr));
  // Edges reached against their direction are written back as -of roles.
  EXPECT_EQ(text, SerializePenman(normalized));
  EXPECT_TRUE(
      IsIsomorphic(NormalizeInverseRoles(ParsePenman(text)), normalized));
}

TEST_F(PipelineTest, InvalidIntermediateFails) {
  PipelineResult r = Run(Input(), Spec("--intermediate invalid"));
  EXPECT_EQ(r.failed.size(), 3u);
  EXPECT_NE(r.failed[0].reason.find("InvalidIntermediate"), std::string::npos);
  EXPECT_EQ(cache_.Size(), 0u);
}

TEST_F(PipelineTest, DegenerateGraphWarns) {
  PipelineResult r = Run(Input(), Spec("--intermediate degenerate"));
  ASSERT_EQ(r.records.size(), 3u);
  // Six tokens: warned. Five tokens: not.
  EXPECT_EQ(r.records[0].warnings, (std::vector<std::string>{"DegenerateGraph"}));
  EXPECT_TRUE(r.records[2].warnings.empty());
}

TEST_F(PipelineTest, EmptyGenerationIsRetriedThenFailed) {
  PipelineResult r = Run(Input(), Spec("--empty-id s1"));
  ASSERT_EQ(r.failed.size(), 1u);
  EXPECT_NE(r.failed[0].reason.find("EmptyGeneration"), std::string::npos);
}

TEST_F(PipelineTest, CorruptCacheEntryIsRefetched) {
  Corpus input = Input();
  Run(input, Spec(""));
  cache_.Put(CacheKey("echo", "1.0", input.sentences[0].text), "{garbage");
  ClearLog();
  PipelineResult r = Run(input, Spec(""));
  EXPECT_EQ(r.cache_hits, 2u);
  EXPECT_EQ(Dispatches(), 1u);
  EXPECT_EQ(r.output.sentences, input.sentences);
}

TEST_F(PipelineTest, NewVersionMissesCache) {
  Run(Input(), Spec(""));
  ClearLog();
  PipelineResult r = Run(Input(), Spec("--version 2.0"));
  EXPECT_EQ(r.cache_hits, 0u);
  EXPECT_EQ(Dispatches(), 3u);
}

TEST_F(PipelineTest, CommitCallbackSeesEveryRecord) {
  std::vector<std::string> committed;
  PipelineOptions options;
  options.on_commit = [&](const ReductionRecord& r) { committed.push_back(r.id); };
  Run(Input(), Spec(""), options);
  std::sort(committed.begin(), committed.end());
  EXPECT_EQ(committed, (std::vector<std::string>{"s1", "s2", "s3"}));
}

TEST(ValidateIntermediateTest, Rules) {
  ReductionRecord r;
  r.id = "x";
  r.input_text = testing::kContrastSentence;
  r.output_text = "He goes to court again now because of the appeal.";
  r.intermediate = testing::kContrastAmr;
  EXPECT_TRUE(ValidateIntermediate(r).empty());

  r.intermediate = "(x / ";
  try {
    ValidateIntermediate(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidIntermediate);
  }

  r.input_text = "one two three four five six seven eight nine ten eleven "
                 "twelve thirteen fourteen fifteen sixteen seventeen eighteen "
                 "nineteen twenty";
  r.intermediate = "(t / thing)";
  EXPECT_EQ(ValidateIntermediate(r), (std::vector<std::string>{"DegenerateGraph"}));
  r.output_text = " ";
  EXPECT_EQ(ValidateIntermediate(r),
            (std::vector<std::string>{"DegenerateGraph", "EmptyGeneration"}));
}

TEST(ReductionRecordTest, Json) {
  ReductionRecord r;
  r.id = "s1";
  r.output_text = "x";
  r.backend_id = "echo";
  nlohmann::ordered_json j = ToJson(r);
  EXPECT_EQ(j["id"], "s1");
  EXPECT_TRUE(j["intermediate"].is_null());
  EXPECT_EQ(j["cache_hit"], false);
}

}  // namespace
}  // namespace tlab

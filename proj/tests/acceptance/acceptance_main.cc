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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "support/oracles.h"
#include "support/test_support.h"
#include "tlab/cache.h"
#include "tlab/cli.h"
#include "tlab/error.h"
#include "tlab/evalharness.h"
#include "tlab/hash.h"
#include "tlab/kernels.h"
#include "tlab/lexicon.h"
#include "tlab/metrics.h"
#include "tlab/penman.h"
#include "tlab/postag.h"
#include "tlab/random.h"
#include "tlab/report.h"

namespace tlab {
namespace {

using Clock = std::chrono::steady_clock;

// Thrown by Require; carries the first violated expectation.
struct Failure {
  std::string what;
};

void Require(bool condition, const std::string& what) {
  if (!condition) throw Failure{what};
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Num(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

// Metric oracle equivalence.
std::string MetricOracle() {
  Clock::time_point start = Clock::now();
  std::vector<oracle::Marker> markers = oracle::ReadMarkers(
      testing::ReadText(testing::SourceDir() + "/data/cohesive_markers.txt"));
  MarkerLexicon lexicon = MarkerLexicon::Default();
  std::mt19937_64 rng(1729);
  size_t total_sentences = 0;
  for (int round = 0; round < 200; ++round) {
    size_t sentences = 1 + Draw(rng, 2000);
    size_t vocabulary = 10 + Draw(rng, 4991);
    oracle::GeneratedCorpus g =
        oracle::RandomCorpus(rng, sentences, vocabulary, markers);
    total_sentences += sentences;
    std::string where = "corpus " + std::to_string(round);

    std::vector<TokenizedSentence> tokens = parallel::TokenizeCorpus(g.corpus);
    Require(tokens == serial::TokenizeCorpus(g.corpus),
            where + ": serial and parallel tokenization differ");
    oracle::TtrOracle expected = oracle::Ttr(g.tokens);
    for (Execution e : {Execution::kSerial, Execution::kParallel}) {
      TtrResult ttr = ComputeTtr(tokens, e);
      Require(ttr.type_count == expected.types &&
                  ttr.token_count == expected.tokens,
              where + ": type/token counts differ from the oracle");
      Require(std::fabs(ttr.ttr - expected.ttr) <= 1e-12,
              where + ": TTR " + Num(ttr.ttr) + " vs " + Num(expected.ttr));
    }

    std::map<std::string, size_t> matches =
        oracle::CohesiveMatches(g.tokens, markers);
    size_t expected_total = 0;
    for (const auto& [marker, count] : matches) expected_total += count;
    for (Execution e : {Execution::kSerial, Execution::kParallel}) {
      CohesiveCounts counts = CountCohesive(tokens, lexicon, e);
      std::map<std::string, size_t> got;
      for (size_t m = 0; m < counts.per_marker.size(); ++m) {
        if (counts.per_marker[m] > 0) {
          got[lexicon.MarkerText(m)] = counts.per_marker[m];
        }
      }
      Require(got == matches && counts.total == expected_total,
              where + ": cohesive counts differ from the oracle");
    }

    std::vector<TaggedSentence> tagged;
    tagged.reserve(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
      tagged.push_back({tokens[i], g.tags[i]});
    }
    std::array<double, kNumTags> freq = oracle::PosFrequencies(g.tags);
    for (Execution e : {Execution::kSerial, Execution::kParallel}) {
      PosFrequencies got = ComputePosFrequencies(tagged, e);
      for (size_t t = 0; t < kNumTags; ++t) {
        Require(got[t] == freq[t],
                where + ": " + std::string(TagName(static_cast<PosTag>(t))) +
                    " frequency " + Num(got[t]) + " vs " + Num(freq[t]));
      }
    }
  }
  double elapsed = Seconds(start);
  Require(elapsed < 60.0, "took " + Num(elapsed) + " s");
  return "200 corpora, " + std::to_string(total_sentences) + " sentences, " +
         std::to_string(elapsed).substr(0, 5) + " s";
}

const char* Mark(bool value) { return value ? "yes" : "no"; }

// Checkmark replay over published TTR and cohesive-marker values.
std::string ChecklistReplay() {
  struct Row {
    const char* system;
    double ttr;
    size_t cohesive;
    bool ttr_check;
    bool cohesive_check;
  };
  const Row rows[] = {
      {"mt", 0.0850, 483, false, false},
      {"para-bart", 0.1172, 277, true, true},
      {"para-t5", 0.0736, 446, false, true},
      {"amr-p-then-g", 0.1002, 348, true, true},
  };
  Comparison comparison;
  comparison.baseline = testing::FixtureReport("translations", 0.0890, 461);
  for (const Row& row : rows) {
    MetricReport report =
        testing::FixtureReport(row.system, row.ttr, row.cohesive);
    bool ttr = TtrImproved(report, comparison.baseline);
    bool cohesive = CohesiveImproved(report, comparison.baseline);
    Require(ttr == row.ttr_check && cohesive == row.cohesive_check,
            std::string(row.system) + ": got TTR " + Mark(ttr) +
                ", cohesive " + Mark(cohesive));
    comparison.systems[row.system] = report;
  }
  std::string md = RenderComparison(comparison).markdown;
  for (const Row& row : rows) {
    char ttr[32];
    std::snprintf(ttr, sizeof(ttr), "%.4f", row.ttr);
    std::string expected = "| " + std::string(row.system) + " | " + ttr +
                           (row.ttr_check ? " ✓" : "") + " | " +
                           std::to_string(row.cohesive) +
                           (row.cohesive_check ? " ✓" : "") + " |";
    Require(md.find(expected) != std::string::npos,
            "rendered row missing: " + expected);
  }
  return "4 systems, 8 checkmarks";
}

// Closeness replay over published ADP/ADV/DET frequencies.
std::string ClosenessReplay() {
  struct Row {
    const char* system;
    double adp, adv, det;
    bool adp_closer, adv_closer, det_closer;
  };
  // Expected booleans computed by hand from |system - original| against
  // |translations - original|.
  const Row rows[] = {
      {"mt", 0.1144, 0.0413, 0.1004, false, true, false},
      {"para-bart", 0.1009, 0.0457, 0.0960, false, false, false},
      {"para-t5", 0.1060, 0.0333, 0.0958, false, false, false},
      {"amr-p-then-g", 0.1103, 0.0419, 0.0963, true, true, false},
  };
  MetricReport base =
      testing::FixtureReport("translations", 0.1, 1, 0.1129, 0.0433, 0.0982);
  MetricReport orig =
      testing::FixtureReport("original", 0.1, 1, 0.1108, 0.0389, 0.0984);
  const std::vector<PosTag> tags = {PosTag::kAdp, PosTag::kAdv, PosTag::kDet};
  for (const Row& row : rows) {
    MetricReport sys = testing::FixtureReport(row.system, 0.1, 1, row.adp,
                                              row.adv, row.det);
    std::map<PosTag, bool> closer = PosCloseness(sys, base, orig, tags);
    Require(closer.at(PosTag::kAdp) == row.adp_closer &&
                closer.at(PosTag::kAdv) == row.adv_closer &&
                closer.at(PosTag::kDet) == row.det_closer,
            std::string(row.system) + ": got ADP " +
                Mark(closer.at(PosTag::kAdp)) + ", ADV " +
                Mark(closer.at(PosTag::kAdv)) + ", DET " +
                Mark(closer.at(PosTag::kDet)));
  }
  return "MT moves away on ADP and DET; AMR closer on ADP and ADV";
}

std::string Mutate(std::string text, std::mt19937_64& rng) {
  static const std::string kAlphabet = "()/:\"~ \n\tabz019-_.\\e";
  int edits = 1 + static_cast<int>(Draw(rng, 4));
  for (int e = 0; e < edits; ++e) {
    size_t pos = text.empty() ? 0 : Draw(rng, text.size());
    switch (Draw(rng, 6)) {
      case 0:
        if (!text.empty()) text.erase(pos, 1);
        break;
      case 1:
        text.insert(text.begin() + pos, kAlphabet[Draw(rng, kAlphabet.size())]);
        break;
      case 2:
        if (!text.empty()) text[pos] = kAlphabet[Draw(rng, kAlphabet.size())];
        break;
      case 3: {
        size_t len = 1 + Draw(rng, 12);
        text.insert(pos, text.substr(pos, len));
        break;
      }
      case 4:
        text.resize(pos);
        break;
      default:
        if (text.size() > 1) {
          size_t other = Draw(rng, text.size());
          std::swap(text[pos], text[other]);
        }
    }
  }
  return text;
}

// PENMAN round trip and mutation fuzzing.
std::string PenmanRoundTrip() {
  AmrGraph example = ParsePenman(testing::kContrastAmr);
  GraphStats stats = ComputeGraphStats(example);
  Require(stats.node_count == 12 && stats.edge_count == 11,
          "example graph has " + std::to_string(stats.node_count) +
              " nodes and " + std::to_string(stats.edge_count) + " edges");
  Require(example.FindNode(example.root)->concept_label == "contrast-01",
          "example graph root is not contrast-01");

  std::vector<std::string> texts = {testing::kContrastAmr};
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 1000; ++i) {
    texts.push_back(SerializePenman(oracle::RandomGraph(rng, 50, 3)));
  }
  for (const std::string& text : texts) {
    AmrGraph parsed = ParsePenman(text);
    AmrGraph again = ParsePenman(SerializePenman(parsed));
    Require(IsIsomorphic(parsed, again) &&
                oracle::Signature(parsed) == oracle::Signature(again),
            "round trip changed the graph:\n" + text);
  }

  size_t typed = 0;
  size_t valid = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string mutated = Mutate(texts[Draw(rng, texts.size())], rng);
    try {
      AmrGraph g = ParsePenman(mutated);
      ValidateGraph(g);
      Require(IsIsomorphic(g, ParsePenman(SerializePenman(g))),
              "mutated graph does not round trip:\n" + mutated);
      ++valid;
    } catch (const Error&) {
      ++typed;
    } catch (const Failure&) {
      throw;
    } catch (const std::exception& e) {
      throw Failure{"untyped " + std::string(e.what()) + " for:\n" + mutated};
    }
  }
  return "1001 graphs; fuzz: " + std::to_string(typed) + " typed errors, " +
         std::to_string(valid) + " valid";
}

// Tagger determinism and memorization.
std::string TaggerDeterminism() {
  std::vector<TaggedSentence> treebank = testing::ToyTreebank();
  TrainingOptions options;
  options.epochs = 10;
  options.seed = 31337;
  testing::TempDir dir;
  TaggerModel::Train(treebank, options).Save(dir.Join("a.model"));
  TaggerModel::Train(treebank, options).Save(dir.Join("b.model"));
  Require(testing::ReadText(dir.Join("a.model")) ==
              testing::ReadText(dir.Join("b.model")),
          "model files differ between runs");

  for (int epochs = 1; epochs <= 10; ++epochs) {
    options.epochs = epochs;
    TaggerModel model = TaggerModel::Train(treebank, options);
    size_t correct = 0;
    size_t total = 0;
    for (const TaggedSentence& s : treebank) {
      std::vector<PosTag> predicted = model.Tag(s.sentence);
      for (size_t i = 0; i < predicted.size(); ++i) {
        correct += predicted[i] == s.tags[i];
        ++total;
      }
    }
    if (correct == total) {
      return "identical model bytes; 100% training accuracy after " +
             std::to_string(epochs) + " epoch(s)";
    }
  }
  throw Failure{"toy treebank not memorized within 10 epochs"};
}

// Spearman correctness.
std::string SpearmanCorrectness() {
  size_t checked = 0;
  for (size_t n = 2; n <= 6; ++n) {
    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), 1.0);
    std::vector<double> y = x;
    do {
      std::optional<double> rho = SpearmanRho(x, y);
      double expected = oracle::SpearmanClosedForm(x, y);
      Require(rho && std::fabs(*rho - expected) <= 1e-12,
              "n=" + std::to_string(n) + ": " + Num(rho.value_or(NAN)) +
                  " vs " + Num(expected));
      ++checked;
    } while (std::next_permutation(y.begin(), y.end()));
  }
  std::vector<double> a = {1, 2, 3, 4};
  std::vector<double> b = {1, 3, 2, 4};
  std::optional<double> hand = SpearmanRho(a, b);
  Require(hand && std::fabs(*hand - 0.8) <= 1e-12,
          "hand case gave " + Num(hand.value_or(NAN)));

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 2 + Draw(rng, 40);
    std::vector<double> x;
    for (size_t i = 0; i < n; ++i) x.push_back(1 + static_cast<double>(Draw(rng, 4)));
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
      continue;
    }
    std::vector<double> reversed;
    for (double v : x) reversed.push_back(5 - v);
    std::optional<double> same = SpearmanRho(x, x);
    std::optional<double> opposite = SpearmanRho(x, reversed);
    Require(same && *same == 1.0, "identical annotators gave " +
                                      Num(same.value_or(NAN)));
    Require(opposite && *opposite == -1.0,
            "reversed annotators gave " + Num(opposite.value_or(NAN)));
  }

  std::vector<Judgment> judgments;
  for (int item = 0; item < 20; ++item) {
    int score = 1 + item % 4;
    judgments.push_back({"a", "i" + std::to_string(item), "sys",
                         Dimension::kFluency, score});
    judgments.push_back({"b", "i" + std::to_string(item), "sys",
                         Dimension::kFluency, score});
  }
  std::optional<double> iaa = SpearmanIaa(judgments).at(Dimension::kFluency);
  Require(iaa && *iaa == 1.0, "identical judgment files gave " +
                                  Num(iaa.value_or(NAN)));
  return std::to_string(checked) + " permutations; hand case 0.8; +-1 exact";
}

// Rank replay over synthetic judgments with published means.
std::string RankReplay() {
  struct Target {
    const char* system;
    Dimension dimension;
    int sum;  // over 100 judgments
    int rank;
  };
  const Target targets[] = {
      {"mt", Dimension::kAdequacy, 359, 1},
      {"amr", Dimension::kAdequacy, 334, 2},
      {"t5", Dimension::kAdequacy, 297, 3},
      {"bart", Dimension::kAdequacy, 245, 4},
      {"t5", Dimension::kFluency, 339, 1},
      {"mt", Dimension::kFluency, 335, 2},
      {"original", Dimension::kFluency, 319, 3},
      {"amr", Dimension::kFluency, 276, 4},
      {"bart", Dimension::kFluency, 191, 5},
  };
  std::vector<std::string> rows;
  for (const Target& t : targets) {
    int base = t.sum / 100;
    int extra = t.sum % 100;
    std::vector<int> scores(100, base);
    std::fill(scores.begin(), scores.begin() + extra, base + 1);
    for (int j = 0; j < 100; ++j) {
      rows.push_back(std::string(j % 2 ? "ann2" : "ann1") + ",item" +
                     std::to_string(j / 2) + "," + t.system + "," +
                     std::string(DimensionName(t.dimension)) + "," +
                     std::to_string(scores[j]));
    }
  }
  std::mt19937_64 rng(5);
  Shuffle(rows, rng);
  std::string csv = "annotator,item_id,system_id,dimension,score\n";
  for (const std::string& row : rows) csv += row + "\n";

  std::vector<SystemScore> scores =
      Aggregate(ParseJudgments(csv, "synthetic.csv"));
  Require(scores.size() == std::size(targets), "wrong number of score rows");
  for (const Target& t : targets) {
    auto it = std::find_if(scores.begin(), scores.end(), [&](const auto& s) {
      return s.system_id == t.system && s.dimension == t.dimension;
    });
    Require(it != scores.end(), std::string("missing ") + t.system);
    Require(it->count == 100 && it->sum == t.sum &&
                it->mean == t.sum / 100.0,
            std::string(t.system) + " mean " + Num(it->mean));
    Require(it->rank == t.rank, std::string(t.system) + " " +
                                    std::string(DimensionName(t.dimension)) +
                                    " ranked " + std::to_string(it->rank));
  }
  std::string table = RenderEvalTable(scores);
  for (const char* row : {"| mt | 3.59 (1) | 3.35 (2) |",
                          "| bart | 2.45 (4) | 1.91 (5) |",
                          "| t5 | 2.97 (3) | 3.39 (1) |",
                          "| amr | 3.34 (2) | 2.76 (4) |",
                          "| original | - | 3.19 (3) |"}) {
    Require(table.find(row) != std::string::npos,
            std::string("rendered row missing: ") + row);
  }
  return "900 judgments; both rank columns reproduced";
}

size_t CacheEntries(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) return 0;
  size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") ++count;
  }
  return count;
}

// Starts the CLI in its own process group; returns the pid.
pid_t Spawn(const std::vector<std::string>& args, const std::string& cwd,
            const std::string& log) {
  pid_t pid = fork();
  if (pid == 0) {
    setpgid(0, 0);
    if (chdir(cwd.c_str()) != 0) _exit(127);
    unsetenv(kCacheEnvVar);
    FILE* out = std::freopen(log.c_str(), "a", stdout);
    FILE* err = std::freopen(log.c_str(), "a", stderr);
    (void)out;
    (void)err;
    std::vector<char*> argv;
    std::string binary = testing::CliPath();
    argv.push_back(binary.data());
    std::vector<std::string> copy = args;
    for (std::string& a : copy) argv.push_back(a.data());
    argv.push_back(nullptr);
    execv(binary.c_str(), argv.data());
    _exit(127);
  }
  return pid;
}

size_t LineCount(const std::string& path) {
  if (!std::filesystem::exists(path)) return 0;
  std::string text = testing::ReadText(path);
  return static_cast<size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Kill-and-resume resilience of `run`.
std::string PipelineResilience() {
  Require(CacheKey("b", "ab", "c") != CacheKey("b", "a", "bc") &&
              CacheKey("ab", "c", "x") != CacheKey("a", "bc", "x") &&
              Sha256Hex("bab" "c") == Sha256Hex("ba" "bc"),
          "framing collision test failed");

  testing::TempDir dir;
  const size_t kSentences = 60;
  std::string corpus;
  std::mt19937_64 text_rng(8);
  for (size_t i = 0; i < kSentences; ++i) {
    corpus += "s" + std::to_string(i) + "\tSentence number " +
              std::to_string(i) + " has " + std::to_string(Draw(text_rng, 1000)) +
              " words .\n";
  }
  testing::WriteText(dir.Join("in.tsv"), corpus);
  std::string worker = "--transform reverse-words --delay-ms 15 --log " +
                       testing::ShellQuote(dir.Join("worker.log"));
  testing::WriteText(dir.Join("echo.backend"),
                     testing::EchoBackendSpec("echo", worker, 10, 4, 2, 2));
  std::vector<std::string> run = {"run", "--backend", "echo.backend", "--in",
                                  "in.tsv", "--out", "out.tsv", "--cache",
                                  "cache"};

  std::mt19937_64 rng(20260101);
  std::vector<size_t> points;
  while (points.size() < 3) {
    size_t p = 1 + Draw(rng, kSentences - 2);
    if (std::find(points.begin(), points.end(), p) == points.end()) {
      points.push_back(p);
    }
  }
  std::sort(points.begin(), points.end());

  std::string killed_at;
  for (size_t point : points) {
    pid_t pid = Spawn(run, dir.path(), dir.Join("cli.log"));
    int status = 0;
    bool exited = false;
    while (!exited) {
      if (CacheEntries(dir.Join("cache")) >= point) break;
      exited = waitpid(pid, &status, WNOHANG) == pid;
      std::this_thread::sleep_for(std::chrono::microseconds(200));
    }
    Require(!exited, "run finished before reaching kill point " +
                         std::to_string(point));
    kill(-pid, SIGKILL);
    waitpid(pid, &status, 0);
    Require(WIFSIGNALED(status), "run was not killed");
    killed_at += (killed_at.empty() ? "" : ",") +
                 std::to_string(CacheEntries(dir.Join("cache")));
  }
  // Let orphaned workers notice the closed pipe before the final resume.
  std::this_thread::sleep_for(std::chrono::milliseconds(200));

  testing::CommandResult resumed = testing::RunCli(run, dir.path(),
                                                   {{std::string(kCacheEnvVar), ""}});
  Require(resumed.exit_code == 0, "resume failed: " + resumed.err);

  std::vector<std::string> fresh = run;
  fresh[6] = "fresh.tsv";
  fresh[8] = "fresh-cache";
  testing::CommandResult uninterrupted =
      testing::RunCli(fresh, dir.path(), {{std::string(kCacheEnvVar), ""}});
  Require(uninterrupted.exit_code == 0, "uninterrupted run failed");
  Require(testing::ReadText(dir.Join("out.tsv")) ==
              testing::ReadText(dir.Join("fresh.tsv")),
          "resumed output differs from an uninterrupted run");
  Require(LineCount(dir.Join("out.tsv")) == kSentences, "output incomplete");

  size_t before = LineCount(dir.Join("worker.log"));
  fresh[6] = "rerun.tsv";
  testing::CommandResult rerun =
      testing::RunCli(fresh, dir.path(), {{std::string(kCacheEnvVar), ""}});
  Require(rerun.exit_code == 0, "rerun failed");
  Require(LineCount(dir.Join("worker.log")) == before,
          "rerun dispatched requests to the worker");
  std::string expected_summary = std::to_string(kSentences) + " cache hits, 0 dispatched";
  Require(rerun.out.find(expected_summary) != std::string::npos,
          "rerun summary: " + rerun.out);
  Require(testing::ReadText(dir.Join("rerun.tsv")) ==
              testing::ReadText(dir.Join("fresh.tsv")),
          "rerun output differs");
  return "killed at cache sizes " + killed_at +
         "; resumed output identical; rerun 100% hits, 0 dispatches";
}

}  // namespace
}  // namespace tlab

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string()> check;
  };
  const Criterion criteria[] = {
      {"metric oracle equivalence", tlab::MetricOracle},
      {"TTR and cohesive checkmark replay", tlab::ChecklistReplay},
      {"POS closeness replay", tlab::ClosenessReplay},
      {"PENMAN round trip and fuzzing", tlab::PenmanRoundTrip},
      {"tagger determinism and memorization", tlab::TaggerDeterminism},
      {"Spearman correctness", tlab::SpearmanCorrectness},
      {"human evaluation rank replay", tlab::RankReplay},
      {"pipeline kill-and-resume", tlab::PipelineResilience},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    std::string verdict;
    std::string detail;
    try {
      detail = c.check();
      verdict = "PASS";
    } catch (const tlab::Failure& f) {
      verdict = "FAIL";
      detail = f.what;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string("unexpected exception: ") + e.what();
    }
    if (verdict == "FAIL") ++failed;
    std::cout << verdict << " AC" << index << " " << c.name << ": " << detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

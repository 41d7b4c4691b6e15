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

#include "tlab/cli.h"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include "CLI11.hpp"
#include "tlab/backend_spec.h"
#include "tlab/cache.h"
#include "tlab/conllu.h"
#include "tlab/corpus.h"
#include "tlab/error.h"
#include "tlab/evalharness.h"
#include "tlab/hash.h"
#include "tlab/kernels.h"
#include "tlab/lexicon.h"
#include "tlab/metrics.h"
#include "tlab/penman.h"
#include "tlab/pipeline.h"
#include "tlab/postag.h"
#include "tlab/random.h"
#include "tlab/report.h"
#include "tlab/textnorm.h"
#include "tlab/transport.h"

namespace tlab {
namespace {

struct Globals {
  std::optional<uint64_t> seed;
  bool cache_flag_given = false;
};

// Splits "key=value"; throws InvalidConfig.
std::pair<std::string, std::string> SplitAssignment(const std::string& text,
                                                    const std::string& flag) {
  size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error(ErrorKind::kInvalidConfig,
                flag + " expects id=path, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    if (comma > pos) items.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return items;
}

void WriteJson(const std::string& path, const nlohmann::ordered_json& json) {
  WriteFileAtomic(path, json.dump(2) + "\n");
}

std::vector<TaggedSentence> TagWith(
    const TaggerModel& model, const std::vector<TokenizedSentence>& tokens) {
  std::vector<std::vector<PosTag>> tags = parallel::TagCorpus(model, tokens);
  std::vector<TaggedSentence> tagged;
  tagged.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    tagged.push_back({tokens[i], std::move(tags[i])});
  }
  return tagged;
}

MarkerLexicon LexiconFrom(const std::string& path) {
  return path.empty() ? MarkerLexicon::Default() : MarkerLexicon::Load(path);
}

void AddIngest(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("ingest", "Validate a corpus and write it "
                                           "in canonical id<TAB>text form");
  struct Args {
    std::string in, role = "translation", name, system_id, out;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--in", args->in, "Corpus file")->required();
  cmd->add_option("--role", args->role,
                  "translation, original or system_output");
  cmd->add_option("--name", args->name, "Corpus name (default: file stem)");
  cmd->add_option("--system-id", args->system_id,
                  "System id for system_output corpora");
  cmd->add_option("--out", args->out, "Canonical output file");
  cmd->callback([&action, args] {
    action = [args] {
      std::string name = args->name.empty()
                             ? std::filesystem::path(args->in).stem().string()
                             : args->name;
      std::optional<std::string> system_id;
      if (!args->system_id.empty()) system_id = args->system_id;
      Corpus corpus =
          LoadCorpus(args->in, ParseRole(args->role), name, system_id);
      if (!args->out.empty()) SaveCorpus(corpus, args->out);
      std::cout << corpus.name << "\t" << RoleName(corpus.role) << "\t"
                << corpus.size() << " sentences\n";
    };
  });
}

void AddTokenize(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("tokenize", "Print id<TAB>space-joined tokens");
  struct Args {
    std::string in, out;
    bool lower = false;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--in", args->in, "Corpus file")->required();
  cmd->add_option("--out", args->out, "Output file (default: stdout)");
  cmd->add_flag("--lower", args->lower, "Print case-folded tokens");
  cmd->callback([&action, args] {
    action = [args] {
      Corpus corpus = LoadCorpus(args->in, CorpusRole::kTranslation, "input");
      std::vector<TokenizedSentence> tokens = parallel::TokenizeCorpus(corpus);
      std::string text;
      for (const TokenizedSentence& s : tokens) {
        text += s.id + "\t";
        for (size_t i = 0; i < s.tokens.size(); ++i) {
          if (i > 0) text += ' ';
          text += args->lower ? s.tokens[i].lowered : s.tokens[i].surface;
        }
        text += '\n';
      }
      if (args->out.empty()) {
        std::cout << text;
      } else {
        WriteFileAtomic(args->out, text);
      }
    };
  });
}

void AddTrainTagger(CLI::App& app, const Globals& globals,
                    std::function<void()>& action) {
  auto* cmd = app.add_subcommand("train-tagger",
                                 "Train the averaged perceptron tagger");
  struct Args {
    std::string treebank, out;
    int epochs = 5;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--treebank", args->treebank, "CoNLL-U training file")
      ->required();
  cmd->add_option("--epochs", args->epochs, "Training epochs");
  cmd->add_option("--out", args->out, "Model file")->required();
  cmd->callback([&action, &globals, args] {
    action = [&globals, args] {
      std::vector<TaggedSentence> treebank = LoadPretagged(args->treebank);
      TrainingOptions options;
      options.epochs = args->epochs;
      options.seed = globals.seed.value_or(0);
      TaggerModel model = TaggerModel::Train(treebank, options);
      model.Save(args->out);
      std::cout << "model:" << model.Hash() << "\n";
    };
  });
}

void AddTag(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("tag", "Tag a corpus, writing CoNLL-U");
  struct Args {
    std::string model, in, out;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--model", args->model, "Tagger model")->required();
  cmd->add_option("--in", args->in, "Corpus file")->required();
  cmd->add_option("--out", args->out, "CoNLL-U output")->required();
  cmd->callback([&action, args] {
    action = [args] {
      TaggerModel model = TaggerModel::Load(args->model);
      Corpus corpus = LoadCorpus(args->in, CorpusRole::kTranslation, "input");
      SavePretagged(TagWith(model, parallel::TokenizeCorpus(corpus)),
                    args->out);
    };
  });
}

void AddMetrics(CLI::App& app, const Globals& globals,
                std::function<void()>& action) {
  auto* cmd = app.add_subcommand("metrics", "Compute a metric report");
  struct Args {
    std::string corpus, name, tagged, model, lexicon, tagger_id = "external",
        records, out;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--corpus", args->corpus, "Corpus file")->required();
  cmd->add_option("--name", args->name, "Corpus name (default: file stem)");
  auto* tagged = cmd->add_option("--tagged", args->tagged,
                                 "Pre-tagged CoNLL-U for POS frequencies");
  auto* model =
      cmd->add_option("--model", args->model, "Tagger model for POS frequencies");
  tagged->excludes(model);
  cmd->add_option("--tagger-id", args->tagger_id,
                  "Label recorded for a pre-tagged file's tagger");
  cmd->add_option("--lexicon", args->lexicon,
                  "Cohesive-marker lexicon (default: built-in)");
  cmd->add_option("--records", args->records,
                  "Pipeline records whose backend version is recorded");
  cmd->add_option("--out", args->out, "Report JSON (default: stdout)");
  cmd->callback([&action, &globals, args] {
    action = [&globals, args] {
      std::string name = args->name.empty()
                             ? std::filesystem::path(args->corpus).stem().string()
                             : args->name;
      Corpus corpus = LoadCorpus(args->corpus, CorpusRole::kTranslation, name);
      MarkerLexicon lexicon = LexiconFrom(args->lexicon);
      std::vector<TokenizedSentence> tokens = parallel::TokenizeCorpus(corpus);
      std::vector<TaggedSentence> tagged;
      Provenance provenance;
      provenance.tokenizer_version = std::string(kTokenizerVersion);
      provenance.lexicon_source = lexicon.source();
      provenance.lexicon_hash = lexicon.hash();
      provenance.seed = globals.seed;
      if (!args->model.empty()) {
        TaggerModel model = TaggerModel::Load(args->model);
        tagged = TagWith(model, tokens);
        provenance.tagger = "model:" + model.Hash();
      } else if (!args->tagged.empty()) {
        tagged = LoadPretagged(args->tagged);
        provenance.tagger = "pretagged:" + args->tagger_id;
      }
      if (!args->records.empty()) {
        std::string contents = ReadFile(args->records);
        size_t pos = 0;
        while (pos < contents.size()) {
          size_t end = contents.find('\n', pos);
          if (end == std::string::npos) end = contents.size();
          std::string line = contents.substr(pos, end - pos);
          pos = end + 1;
          if (line.empty()) continue;
          try {
            nlohmann::json record = nlohmann::json::parse(line);
            provenance.backend_versions[record.at("backend_id")] =
                record.at("backend_version");
          } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::kInvalidConfig,
                        args->records + ": " + e.what());
          }
        }
      }
      MetricReport report =
          BuildMetricReport(name, tokens, lexicon, tagged, provenance);
      nlohmann::ordered_json json = ToJson(report);
      if (args->out.empty()) {
        std::cout << json.dump(2) << "\n";
      } else {
        WriteJson(args->out, json);
      }
    };
  });
}

void AddCompare(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("compare", "Render comparison tables");
  struct Args {
    std::string baseline, original, similarity, out_dir = ".";
    std::vector<std::string> systems;
    std::string tags = "ADP,ADV,DET";
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--baseline", args->baseline, "Baseline report JSON")
      ->required();
  cmd->add_option("--original", args->original,
                  "Originally written text report JSON");
  cmd->add_option("--system", args->systems, "id=report.json (repeatable)")
      ->required();
  cmd->add_option("--similarity", args->similarity,
                  "Similarity scores JSON for an auxiliary table");
  cmd->add_option("--tags", args->tags, "Comma-separated UPOS tags");
  cmd->add_option("--out-dir", args->out_dir, "Directory for report.*");
  cmd->callback([&action, args] {
    action = [args] {
      Comparison comparison;
      comparison.baseline = LoadMetricReport(args->baseline);
      if (!args->original.empty()) {
        comparison.original = LoadMetricReport(args->original);
      }
      for (const std::string& entry : args->systems) {
        auto [id, path] = SplitAssignment(entry, "--system");
        if (!comparison.systems.emplace(id, LoadMetricReport(path)).second) {
          throw Error(ErrorKind::kInvalidConfig,
                      "system '" + id + "' given twice");
        }
      }
      RenderOptions options;
      options.tags.clear();
      for (const std::string& name : SplitList(args->tags)) {
        options.tags.push_back(ParseTagOrThrow(name, "--tags"));
      }
      if (!args->similarity.empty()) {
        options.similarity = LoadSimilarity(args->similarity);
      }
      ReportDocuments docs = RenderComparison(comparison, options);
      WriteReport(docs, args->out_dir);
      std::cout << docs.markdown;
    };
  });
}

void AddRun(CLI::App& app, const Globals& globals,
            std::function<void()>& action) {
  auto* cmd = app.add_subcommand("run", "Rewrite a corpus through a backend");
  struct Args {
    std::string backend, in, out, cache;
    bool normalize = false;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--backend", args->backend, "Backend spec file")->required();
  cmd->add_option("--in", args->in, "Input corpus")->required();
  cmd->add_option("--out", args->out, "Output corpus")->required();
  cmd->add_option("--cache", args->cache, "Response cache directory");
  cmd->add_flag("--normalize-amr", args->normalize,
                "Record intermediates with inverse roles normalized");
  cmd->callback([&action, &globals, args] {
    action = [&globals, args] {
      std::string cache_dir = args->cache;
      const char* env = std::getenv(kCacheEnvVar);
      if (!globals.cache_flag_given && env != nullptr && *env != '\0') {
        cache_dir = env;
      }
      if (cache_dir.empty()) cache_dir = ".cache";

      BackendSpec spec = LoadBackendSpec(args->backend);
      Corpus input = LoadCorpus(args->in, CorpusRole::kTranslation, "input");
      ResponseCache cache(cache_dir);
      std::unique_ptr<Transport> transport = MakeTransport(spec);
      PipelineOptions options;
      options.normalize_intermediate = args->normalize;
      PipelineResult result =
          RunPipeline(input, spec, cache, *transport, options);

      SaveCorpus(result.output, args->out);
      std::string records;
      for (const ReductionRecord& record : result.records) {
        records += ToJson(record).dump() + "\n";
      }
      WriteFileAtomic(args->out + ".records.jsonl", records);
      std::string failed;
      for (const FailedSentence& f : result.failed) {
        failed += f.id + "\t" + f.reason + "\n";
      }
      WriteFileAtomic(args->out + ".failed.tsv", failed);
      std::cout << spec.id << " " << result.backend_version << ": "
                << result.records.size() << " rewritten, "
                << result.failed.size() << " failed, " << result.cache_hits
                << " cache hits, " << result.dispatched << " dispatched\n";
    };
  });
}

void AddAmr(CLI::App& app, std::function<void()>& action) {
  auto* amr = app.add_subcommand("amr", "PENMAN utilities");
  amr->require_subcommand(1);

  struct CheckArgs {
    std::string in, rewrite;
    bool normalize = false;
  };
  auto check_args = std::make_shared<CheckArgs>();
  auto* check = amr->add_subcommand("check", "Parse and validate graphs");
  check->add_option("--in", check_args->in, "File of PENMAN graphs")
      ->required();
  check->add_option("--rewrite", check_args->rewrite,
                    "Write valid graphs back in canonical form");
  check->add_flag("--normalize", check_args->normalize,
                  "Normalize inverse roles when rewriting");
  check->callback([&action, check_args] {
    action = [check_args] {
      std::vector<AmrFileEntry> entries =
          ParseAmrFile(ReadFile(check_args->in));
      size_t bad = 0;
      std::string rewritten;
      for (const AmrFileEntry& entry : entries) {
        if (!entry.graph) {
          ++bad;
          std::cout << check_args->in << ":" << entry.first_line << ": "
                    << entry.error << "\n";
          continue;
        }
        AmrGraph graph = check_args->normalize
                             ? NormalizeInverseRoles(*entry.graph)
                             : *entry.graph;
        if (!rewritten.empty()) rewritten += "\n";
        rewritten += SerializePenman(graph) + "\n";
      }
      if (!check_args->rewrite.empty()) {
        WriteFileAtomic(check_args->rewrite, rewritten);
      }
      std::cout << entries.size() - bad << " of " << entries.size()
                << " graphs valid\n";
      if (bad > 0) {
        throw Error(ErrorKind::kMalformedPenman,
                    std::to_string(bad) + " invalid graph(s) in " +
                        check_args->in);
      }
    };
  });

  struct StatsArgs {
    std::string in;
    bool json = false;
  };
  auto stats_args = std::make_shared<StatsArgs>();
  auto* stats = amr->add_subcommand("stats", "Per-graph structure statistics");
  stats->add_option("--in", stats_args->in, "File of PENMAN graphs")
      ->required();
  stats->add_flag("--json", stats_args->json, "Emit JSON");
  stats->callback([&action, stats_args] {
    action = [stats_args] {
      std::vector<AmrFileEntry> entries =
          ParseAmrFile(ReadFile(stats_args->in));
      nlohmann::ordered_json json = nlohmann::ordered_json::array();
      std::string table =
          "line\troot\tnodes\tedges\tattributes\treentrancies\tmax_depth\n";
      for (const AmrFileEntry& entry : entries) {
        if (!entry.graph) {
          throw Error(ErrorKind::kMalformedPenman,
                      stats_args->in + ":" + std::to_string(entry.first_line) +
                          ": " + entry.error);
        }
        GraphStats s = ComputeGraphStats(*entry.graph);
        const AmrNode* root = entry.graph->FindNode(entry.graph->root);
        std::string concept_label = root ? root->concept_label : "";
        json.push_back({{"line", entry.first_line},
                        {"root", concept_label},
                        {"node_count", s.node_count},
                        {"edge_count", s.edge_count},
                        {"attribute_count", s.attribute_count},
                        {"reentrancy_count", s.reentrancy_count},
                        {"max_depth", s.max_depth}});
        table += std::to_string(entry.first_line) + "\t" + concept_label +
                 "\t" + std::to_string(s.node_count) + "\t" +
                 std::to_string(s.edge_count) + "\t" +
                 std::to_string(s.attribute_count) + "\t" +
                 std::to_string(s.reentrancy_count) + "\t" +
                 std::to_string(s.max_depth) + "\n";
      }
      std::cout << (stats_args->json ? json.dump(2) + "\n" : table);
    };
  });
}

void AddEval(CLI::App& app, const Globals& globals,
             std::function<void()>& action) {
  auto* eval = app.add_subcommand("eval", "Human evaluation");
  eval->require_subcommand(1);

  struct SheetArgs {
    std::string baseline, items, annotators, dimension = "fluency",
        out_dir = ".";
    std::vector<std::string> systems;
    size_t sample = 0;
  };
  auto sheet_args = std::make_shared<SheetArgs>();
  auto* sheets = eval->add_subcommand("sheets", "Build blinded sheets");
  sheets->add_option("--baseline", sheet_args->baseline,
                     "Translations shown as originals")
      ->required();
  sheets->add_option("--system", sheet_args->systems,
                     "id=output corpus (repeatable)")
      ->required();
  sheets->add_option("--annotators", sheet_args->annotators,
                     "Comma-separated annotator names")
      ->required();
  sheets->add_option("--dimension", sheet_args->dimension,
                     "adequacy or fluency");
  auto* items = sheets->add_option("--items", sheet_args->items,
                                   "Comma-separated item ids (default: all)");
  sheets->add_option("--sample", sheet_args->sample,
                     "Draw this many item ids with the seed")
      ->excludes(items);
  sheets->add_option("--out-dir", sheet_args->out_dir, "Output directory");
  sheets->callback([&action, &globals, sheet_args] {
    action = [&globals, sheet_args] {
      uint64_t seed = globals.seed.value_or(0);
      AlignedSet aligned(LoadCorpus(sheet_args->baseline,
                                    CorpusRole::kTranslation, "baseline"));
      for (const std::string& entry : sheet_args->systems) {
        auto [id, path] = SplitAssignment(entry, "--system");
        aligned.AddOutput(LoadCorpus(path, CorpusRole::kSystemOutput, id, id));
      }
      std::vector<std::string> ids = aligned.baseline().Ids();
      if (!sheet_args->items.empty()) {
        ids = SplitList(sheet_args->items);
      } else if (sheet_args->sample > 0) {
        if (sheet_args->sample > ids.size()) {
          throw Error(ErrorKind::kInvalidConfig,
                      "--sample exceeds the corpus size");
        }
        std::vector<size_t> order(ids.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::mt19937_64 rng(seed);
        Shuffle(order, rng);
        order.resize(sheet_args->sample);
        std::sort(order.begin(), order.end());
        std::vector<std::string> picked;
        for (size_t i : order) picked.push_back(ids[i]);
        ids = std::move(picked);
      }
      std::vector<std::string> annotators = SplitList(sheet_args->annotators);
      SheetSet set = MakeSheets(aligned, ids, annotators,
                                ParseDimension(sheet_args->dimension), seed);
      WriteSheets(set, sheet_args->out_dir);
      std::cout << set.sheets.size() << " sheet(s), " << ids.size()
                << " item(s), blinding_" << seed << ".json\n";
    };
  });

  struct AggregateArgs {
    std::string judgments, blinding, out;
    bool iaa = false;
  };
  auto agg_args = std::make_shared<AggregateArgs>();
  auto* aggregate = eval->add_subcommand("aggregate",
                                         "Mean scores, ranks and agreement");
  aggregate->add_option("--judgments", agg_args->judgments, "Judgments CSV")
      ->required();
  aggregate->add_option("--blinding", agg_args->blinding,
                        "Blinding map to de-blind labels");
  aggregate->add_flag("--iaa", agg_args->iaa,
                      "Also compute Spearman inter-annotator agreement");
  aggregate->add_option("--out", agg_args->out, "Summary JSON");
  aggregate->callback([&action, agg_args] {
    action = [agg_args] {
      std::optional<BlindingMap> blinding;
      if (!agg_args->blinding.empty()) {
        blinding = LoadBlinding(agg_args->blinding);
      }
      std::vector<Judgment> judgments = LoadJudgments(
          agg_args->judgments, blinding ? &*blinding : nullptr);
      std::vector<SystemScore> scores = Aggregate(judgments);
      std::optional<std::map<Dimension, std::optional<double>>> iaa;
      if (agg_args->iaa) iaa = SpearmanIaa(judgments);
      const auto* iaa_ptr = iaa ? &*iaa : nullptr;
      std::cout << RenderEvalTable(scores, iaa_ptr);
      if (!agg_args->out.empty()) {
        WriteJson(agg_args->out, EvalToJson(scores, iaa_ptr));
      }
    };
  });
}

}  // namespace

int Dispatch(int argc, const char* const* argv) {
  CLI::App app{"Translationese measurement and reduction toolkit",
               "translationese-lab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file; command-line flags win");
  Globals globals;
  app.add_option("--seed", globals.seed,
                 "Seed for every random choice (tagger, sheets)");

  std::function<void()> action;
  AddIngest(app, action);
  AddTokenize(app, action);
  AddTrainTagger(app, globals, action);
  AddTag(app, action);
  AddMetrics(app, globals, action);
  AddCompare(app, action);
  AddRun(app, globals, action);
  AddAmr(app, action);
  AddEval(app, globals, action);

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  for (int i = 1; i < argc; ++i) {
    std::string_view arg = argv[i];
    if (arg == "--cache" || arg.starts_with("--cache=")) {
      globals.cache_flag_given = true;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << KindName(ErrorKind::kIoError) << ": " << e.what() << "\n";
    return 1;
  }
}

int Dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return Dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace tlab

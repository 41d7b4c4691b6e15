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

#include "tlab/corpus.h"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "tlab/error.h"
#include "tlab/hash.h"

namespace tlab {
namespace {

bool IsBlank(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view StripTrailing(std::string_view line) {
  while (!line.empty() && IsBlank(line.back())) line.remove_suffix(1);
  return line;
}

// "id<TAB>text" with a whitespace-free id and non-empty text.
bool HasExplicitId(std::string_view line) {
  size_t tab = line.find('\t');
  if (tab == 0 || tab == std::string_view::npos) return false;
  std::string_view id = line.substr(0, tab);
  if (std::any_of(id.begin(), id.end(), IsBlank)) return false;
  std::string_view text = line.substr(tab + 1);
  return std::any_of(text.begin(), text.end(),
                     [](char c) { return !IsBlank(c); });
}

}  // namespace

std::string_view RoleName(CorpusRole role) {
  switch (role) {
    case CorpusRole::kTranslation: return "translation";
    case CorpusRole::kOriginal: return "original";
    case CorpusRole::kSystemOutput: return "system_output";
  }
  return "translation";
}

CorpusRole ParseRole(std::string_view name) {
  if (name == "translation") return CorpusRole::kTranslation;
  if (name == "original") return CorpusRole::kOriginal;
  if (name == "system_output") return CorpusRole::kSystemOutput;
  throw Error(ErrorKind::kInvalidConfig,
              "unknown corpus role '" + std::string(name) + "'");
}

std::vector<std::string> Corpus::Ids() const {
  std::vector<std::string> ids;
  ids.reserve(sentences.size());
  for (const Sentence& s : sentences) ids.push_back(s.id);
  return ids;
}

Corpus ParseCorpus(std::string_view contents, CorpusRole role,
                   std::string name, std::optional<std::string> system_id) {
  if (role == CorpusRole::kSystemOutput && !system_id) system_id = name;
  if (contents.starts_with("\xEF\xBB\xBF")) contents.remove_prefix(3);

  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    lines.push_back(StripTrailing(contents.substr(start, end - start)));
    start = end + 1;
  }

  for (size_t k = 0; k < lines.size(); ++k) {
    if (lines[k].find_first_not_of(" \t\v\f\r") == std::string_view::npos) {
      throw Error(ErrorKind::kMalformedCorpus,
                  name + ": blank line " + std::to_string(k + 1));
    }
  }
  bool explicit_ids =
      !lines.empty() && std::all_of(lines.begin(), lines.end(), HasExplicitId);

  Corpus corpus;
  corpus.name = std::move(name);
  corpus.role = role;
  corpus.system_id = std::move(system_id);
  corpus.sentences.reserve(lines.size());
  std::unordered_set<std::string> seen;
  for (size_t k = 0; k < lines.size(); ++k) {
    Sentence sentence;
    if (explicit_ids) {
      size_t tab = lines[k].find('\t');
      sentence.id = std::string(lines[k].substr(0, tab));
      sentence.text = std::string(lines[k].substr(tab + 1));
      if (!seen.insert(sentence.id).second) {
        throw Error(ErrorKind::kDuplicateId,
                    corpus.name + ": id '" + sentence.id + "' on line " +
                        std::to_string(k + 1));
      }
    } else {
      sentence.id = "L" + std::to_string(k + 1);
      sentence.text = std::string(lines[k]);
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

Corpus LoadCorpus(const std::string& path, CorpusRole role, std::string name,
                  std::optional<std::string> system_id) {
  return ParseCorpus(ReadFile(path), role, std::move(name),
                     std::move(system_id));
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const Sentence& s : corpus.sentences) {
    out += s.id;
    out += '\t';
    out += s.text;
    out += '\n';
  }
  return out;
}

void SaveCorpus(const Corpus& corpus, const std::string& path) {
  WriteFileAtomic(path, SerializeCorpus(corpus));
}

Corpus Align(const Corpus& baseline, const Corpus& other) {
  std::unordered_map<std::string, size_t> position;
  for (size_t i = 0; i < other.sentences.size(); ++i) {
    position.emplace(other.sentences[i].id, i);
  }
  std::set<std::string> baseline_ids;
  std::vector<std::string> missing, extra;
  for (const Sentence& s : baseline.sentences) {
    baseline_ids.insert(s.id);
    if (!position.contains(s.id)) missing.push_back(s.id);
  }
  for (const Sentence& s : other.sentences) {
    if (!baseline_ids.contains(s.id)) extra.push_back(s.id);
  }
  if (!missing.empty() || !extra.empty() ||
      baseline.size() != other.size()) {
    throw IdMismatchError(std::move(missing), std::move(extra));
  }

  Corpus aligned = other;
  aligned.sentences.clear();
  for (const Sentence& s : baseline.sentences) {
    aligned.sentences.push_back(other.sentences[position.at(s.id)]);
  }
  return aligned;
}

AlignedSet::AlignedSet(Corpus baseline) : baseline_(std::move(baseline)) {
  for (size_t i = 0; i < baseline_.sentences.size(); ++i) {
    index_.emplace(baseline_.sentences[i].id, i);
  }
}

void AlignedSet::SetReference(Corpus reference) {
  reference_ = std::move(reference);
}

void AlignedSet::AddOutput(Corpus output) {
  if (output.role != CorpusRole::kSystemOutput || !output.system_id) {
    throw Error(ErrorKind::kInvalidConfig,
                "corpus '" + output.name + "' is not a system output");
  }
  std::string system_id = *output.system_id;
  outputs_.insert_or_assign(system_id, Align(baseline_, output));
}

const std::string& AlignedSet::TextFor(const std::string& system_id,
                                       const std::string& id) const {
  auto row = index_.find(id);
  if (system_id == "original") {
    if (row == index_.end()) {
      throw Error(ErrorKind::kMissingSystemOutput, "item " + id + ", original");
    }
    return baseline_.sentences[row->second].text;
  }
  auto system = outputs_.find(system_id);
  if (row == index_.end() || system == outputs_.end()) {
    throw Error(ErrorKind::kMissingSystemOutput,
                "item " + id + ", system " + system_id);
  }
  return system->second.sentences[row->second].text;
}

}  // namespace tlab

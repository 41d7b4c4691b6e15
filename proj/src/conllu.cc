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

#include "tlab/conllu.h"

#include "tlab/error.h"
#include "tlab/hash.h"

namespace tlab {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

std::vector<TaggedSentence> ParsePretagged(std::string_view contents,
                                           const std::string& source) {
  std::vector<TaggedSentence> sentences;
  TaggedSentence current;
  bool open = false;
  auto flush = [&] {
    if (open && !current.tags.empty()) {
      if (current.sentence.id.empty()) {
        current.sentence.id = "S" + std::to_string(sentences.size() + 1);
      }
      sentences.push_back(std::move(current));
    }
    current = TaggedSentence{};
    open = false;
  };

  size_t start = 0, line_number = 0;
  while (start < contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string location = source + ":" + std::to_string(line_number);

    if (line.empty()) {
      flush();
      continue;
    }
    open = true;
    if (line[0] == '#') {
      constexpr std::string_view kSentId = "# sent_id = ";
      if (line.starts_with(kSentId)) {
        current.sentence.id = std::string(line.substr(kSentId.size()));
      }
      continue;
    }
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 10) {
      throw Error(ErrorKind::kMalformedRow,
                  location + ": expected 10 columns, found " +
                      std::to_string(fields.size()));
    }
    if (fields[0].find_first_of("-.") != std::string_view::npos) continue;
    if (fields[1].empty()) {
      throw Error(ErrorKind::kMalformedRow, location + ": empty FORM");
    }
    PosTag tag = ParseTagOrThrow(fields[3], location);
    current.sentence.tokens.push_back(
        MakeToken(std::string(fields[1]), current.sentence.tokens.size()));
    current.tags.push_back(tag);
  }
  flush();
  return sentences;
}

std::vector<TaggedSentence> LoadPretagged(const std::string& path) {
  return ParsePretagged(ReadFile(path), path);
}

std::string SerializePretagged(std::span<const TaggedSentence> sentences) {
  std::string out;
  for (const TaggedSentence& s : sentences) {
    if (!s.sentence.id.empty()) out += "# sent_id = " + s.sentence.id + "\n";
    for (size_t i = 0; i < s.sentence.tokens.size(); ++i) {
      out += std::to_string(i + 1);
      out += '\t';
      out += s.sentence.tokens[i].surface;
      out += "\t_\t";
      out += TagName(s.tags[i]);
      out += "\t_\t_\t_\t_\t_\t_\n";
    }
    out += '\n';
  }
  return out;
}

void SavePretagged(std::span<const TaggedSentence> sentences,
                   const std::string& path) {
  WriteFileAtomic(path, SerializePretagged(sentences));
}

}  // namespace tlab

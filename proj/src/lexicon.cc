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

#include "tlab/lexicon.h"

#include <algorithm>

#include "tlab/error.h"
#include "tlab/hash.h"

namespace tlab {
namespace {

constexpr std::string_view kDefaultLexicon = R"(# Default cohesive-marker lexicon: one marker per line, matched
# case-insensitively on token boundaries, longest match first.
as a result
as for
as to
besides
but
consequently
despite
even if
even though
except
for example
for instance
further
furthermore
hence
however
in addition
in conclusion
in fact
in other words
in spite
indeed
instead
is to say
maybe
meanwhile
moreover
nevertheless
nonetheless
on account of
on the contrary
on the other hand
otherwise
referring to
similarly
since
the former
the latter
therefore
thus
)";

}  // namespace

std::string_view DefaultLexiconText() { return kDefaultLexicon; }

MarkerLexicon MarkerLexicon::Parse(std::string_view contents,
                                   std::string source) {
  std::vector<std::vector<std::string>> markers;
  size_t start = 0, line_number = 0;
  while (start < contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (line.find_first_not_of(" \t\r\v\f") == std::string_view::npos) {
      continue;
    }
    std::vector<std::string> marker;
    for (const Token& token : Tokenize(line).tokens) {
      marker.push_back(token.lowered);
    }
    if (marker.size() > kMaxMarkerLength) {
      throw Error(ErrorKind::kInvalidConfig,
                  source + ":" + std::to_string(line_number) +
                      ": marker longer than " +
                      std::to_string(kMaxMarkerLength) + " tokens");
    }
    markers.push_back(std::move(marker));
  }
  if (markers.empty()) {
    throw Error(ErrorKind::kEmptyLexicon, source + " has no markers");
  }

  std::sort(markers.begin(), markers.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a < b;
            });
  markers.erase(std::unique(markers.begin(), markers.end()), markers.end());

  MarkerLexicon lexicon;
  lexicon.markers_ = std::move(markers);
  lexicon.source_ = std::move(source);
  std::string canonical;
  for (size_t i = 0; i < lexicon.markers_.size(); ++i) {
    canonical += lexicon.MarkerText(i);
    canonical += '\n';
    lexicon.by_first_[lexicon.markers_[i].front()].push_back(i);
  }
  lexicon.hash_ = Sha256Hex(canonical);
  return lexicon;
}

MarkerLexicon MarkerLexicon::Load(const std::string& path) {
  return Parse(ReadFile(path), path);
}

MarkerLexicon MarkerLexicon::Default() {
  return Parse(kDefaultLexicon, "builtin:default");
}

std::string MarkerLexicon::MarkerText(size_t index) const {
  std::string text;
  for (const std::string& part : markers_[index]) {
    if (!text.empty()) text += ' ';
    text += part;
  }
  return text;
}

std::optional<size_t> MarkerLexicon::LongestMatchAt(
    std::span<const Token> tokens, size_t pos) const {
  auto candidates = by_first_.find(tokens[pos].lowered);
  if (candidates == by_first_.end()) return std::nullopt;
  for (size_t index : candidates->second) {
    const std::vector<std::string>& marker = markers_[index];
    if (pos + marker.size() > tokens.size()) continue;
    bool match = true;
    for (size_t k = 1; k < marker.size() && match; ++k) {
      match = tokens[pos + k].lowered == marker[k];
    }
    if (match) return index;
  }
  return std::nullopt;
}

}  // namespace tlab

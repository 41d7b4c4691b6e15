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

#ifndef TLAB_CORPUS_H_
#define TLAB_CORPUS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tlab {

enum class CorpusRole { kTranslation, kOriginal, kSystemOutput };

std::string_view RoleName(CorpusRole role);
// Accepts "translation", "original" and "system_output"; throws InvalidConfig.
CorpusRole ParseRole(std::string_view name);

struct Sentence {
  std::string id;
  std::string text;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Immutable after load. Ids are unique; system_output corpora carry a
// system_id.
struct Corpus {
  std::string name;
  CorpusRole role = CorpusRole::kTranslation;
  std::optional<std::string> system_id;
  std::vector<Sentence> sentences;

  size_t size() const { return sentences.size(); }
  std::vector<std::string> Ids() const;
};

// One sentence per line, LF or CRLF. If every line looks like
// "id<TAB>text" the explicit ids are used, otherwise line k gets "L<k>".
// Trailing whitespace is stripped, interior whitespace kept verbatim.
// Throws MalformedCorpus (blank line, with its number) and DuplicateId.
Corpus ParseCorpus(std::string_view contents, CorpusRole role,
                   std::string name,
                   std::optional<std::string> system_id = std::nullopt);

Corpus LoadCorpus(const std::string& path, CorpusRole role, std::string name,
                  std::optional<std::string> system_id = std::nullopt);

// "id<TAB>text" per line; ParseCorpus reads it back unchanged.
std::string SerializeCorpus(const Corpus& corpus);
void SaveCorpus(const Corpus& corpus, const std::string& path);

// Returns `other` reordered to the id order of `baseline`. Throws
// IdMismatchError unless both hold exactly the same ids. Success does not
// depend on argument order.
Corpus Align(const Corpus& baseline, const Corpus& other);

// A translation baseline, an optional (possibly non-parallel) reference of
// originally written text, and system outputs keyed by system id. Every
// output is id-aligned to the baseline.
class AlignedSet {
 public:
  explicit AlignedSet(Corpus baseline);

  void SetReference(Corpus reference);
  // Aligns and stores `output`; requires role system_output.
  void AddOutput(Corpus output);

  const Corpus& baseline() const { return baseline_; }
  const std::optional<Corpus>& reference() const { return reference_; }
  const std::map<std::string, Corpus>& outputs() const { return outputs_; }

  // Text of `id` in the named system's output, or in the baseline when
  // system_id is "original". Throws MissingSystemOutput.
  const std::string& TextFor(const std::string& system_id,
                             const std::string& id) const;

 private:
  Corpus baseline_;
  std::optional<Corpus> reference_;
  std::map<std::string, Corpus> outputs_;
  std::map<std::string, size_t> index_;
};

}  // namespace tlab

#endif  // TLAB_CORPUS_H_

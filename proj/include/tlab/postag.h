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

// Averaged-perceptron part-of-speech tagger over the universal tagset.

#ifndef TLAB_POSTAG_H_
#define TLAB_POSTAG_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/textnorm.h"

namespace tlab {

// Enumerators are in lexicographic order of their names; argmax ties are
// broken towards the lowest enumerator.
enum class PosTag : uint8_t {
  kAdj, kAdp, kAdv, kAux, kCconj, kDet, kIntj, kNoun, kNum,
  kPart, kPron, kPropn, kPunct, kSconj, kSym, kVerb, kX,
};
inline constexpr size_t kNumTags = 17;

std::string_view TagName(PosTag tag);
std::optional<PosTag> ParseTag(std::string_view name);
// Throws InvalidTag naming `location`.
PosTag ParseTagOrThrow(std::string_view name, const std::string& location);

struct TaggedSentence {
  TokenizedSentence sentence;
  std::vector<PosTag> tags;  // parallel to sentence.tokens
};

struct TrainingOptions {
  int epochs = 5;
  uint64_t seed = 0;
  // Words seen at least this often with at least this single-tag purity
  // are tagged by dictionary lookup.
  size_t tagdict_min_count = 20;
  double tagdict_min_purity = 0.97;
};

class TaggerModel {
 public:
  using Weights = std::array<double, kNumTags>;

  // Throws EmptyTrainingSet, or InvalidConfig for epochs < 1.
  static TaggerModel Train(std::span<const TaggedSentence> treebank,
                           const TrainingOptions& options);

  // Greedy left-to-right decoding; one tag per token.
  std::vector<PosTag> Tag(const TokenizedSentence& sentence) const;

  // Canonical bytes: sorted keys, length-prefixed strings, hex floats.
  std::string Serialize() const;
  static TaggerModel Deserialize(std::string_view bytes);

  void Save(const std::string& path) const;
  static TaggerModel Load(const std::string& path);

  // SHA-256 of Serialize(); used as the tagger identity in provenance.
  std::string Hash() const;

  uint64_t seed() const { return seed_; }
  int epochs() const { return epochs_; }
  const std::map<std::string, PosTag>& tagdict() const { return tagdict_; }
  size_t feature_count() const { return weights_.size(); }

 private:
  PosTag Predict(const std::vector<std::string>& features) const;

  std::map<std::string, Weights> weights_;
  std::map<std::string, PosTag> tagdict_;
  uint64_t seed_ = 0;
  int epochs_ = 0;
};

// Feature strings for position `i`, given the two previously assigned tags.
// Exposed for tests.
std::vector<std::string> ExtractFeatures(std::span<const Token> tokens,
                                         size_t i,
                                         std::string_view prev_tag,
                                         std::string_view prev2_tag);

}  // namespace tlab

#endif  // TLAB_POSTAG_H_

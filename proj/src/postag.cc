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

#include "tlab/postag.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <unordered_map>

#include "tlab/error.h"
#include "tlab/hash.h"
#include "tlab/random.h"

namespace tlab {
namespace {

constexpr std::array<std::string_view, kNumTags> kTagNames = {
    "ADJ",  "ADP",  "ADV",  "AUX",   "CCONJ", "DET",   "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
};

constexpr std::string_view kStart = "-START-";
constexpr std::string_view kStart2 = "-START2-";
constexpr std::string_view kEnd = "-END-";
constexpr std::string_view kMagic = "tlab-averaged-perceptron 1";

// First UTF-8 code point of `word`.
std::string_view FirstChar(std::string_view word) {
  if (word.empty()) return word;
  unsigned char lead = static_cast<unsigned char>(word[0]);
  size_t length = lead < 0xC0 ? 1 : lead < 0xE0 ? 2 : lead < 0xF0 ? 3 : 4;
  return word.substr(0, std::min(length, word.size()));
}

// Suffix of at most `n` code points.
std::string_view Suffix(std::string_view word, size_t n) {
  size_t pos = word.size();
  while (n > 0 && pos > 0) {
    --pos;
    while (pos > 0 && (static_cast<unsigned char>(word[pos]) & 0xC0) == 0x80) {
      --pos;
    }
    --n;
  }
  return word.substr(pos);
}

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%a", value);
  return buffer;
}

// Cursor over the serialized model.
class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view Line() {
    size_t end = bytes_.find('\n', pos_);
    if (end == std::string_view::npos) Fail("unexpected end of model");
    std::string_view line = bytes_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return line;
  }

  // "<keyword> <number>" header line.
  uint64_t Header(std::string_view keyword) {
    std::string_view line = Line();
    if (!line.starts_with(keyword) || line.size() <= keyword.size() + 1 ||
        line[keyword.size()] != ' ') {
      Fail("expected '" + std::string(keyword) + "'");
    }
    return ParseUnsigned(line.substr(keyword.size() + 1));
  }

  // "<len>:<bytes>" followed by a single space.
  std::string LengthPrefixed() {
    size_t colon = bytes_.find(':', pos_);
    if (colon == std::string_view::npos) Fail("missing length prefix");
    uint64_t length = ParseUnsigned(bytes_.substr(pos_, colon - pos_));
    if (colon + 1 + length > bytes_.size()) Fail("truncated key");
    std::string key(bytes_.substr(colon + 1, length));
    pos_ = colon + 1 + length;
    if (pos_ >= bytes_.size() || bytes_[pos_] != ' ') Fail("missing separator");
    ++pos_;
    return key;
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

  static uint64_t ParseUnsigned(std::string_view text) {
    if (text.empty() || text.size() > 20) Fail("bad number");
    uint64_t value = 0;
    for (char c : text) {
      if (c < '0' || c > '9') Fail("bad number '" + std::string(text) + "'");
      value = value * 10 + static_cast<uint64_t>(c - '0');
    }
    return value;
  }

  [[noreturn]] static void Fail(const std::string& why) {
    throw Error(ErrorKind::kMalformedModel, why);
  }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

PosTag TagFromModel(std::string_view name) {
  std::optional<PosTag> tag = ParseTag(name);
  if (!tag) Reader::Fail("unknown tag '" + std::string(name) + "'");
  return *tag;
}

}  // namespace

std::string_view TagName(PosTag tag) {
  return kTagNames[static_cast<size_t>(tag)];
}

std::optional<PosTag> ParseTag(std::string_view name) {
  for (size_t i = 0; i < kNumTags; ++i) {
    if (kTagNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

PosTag ParseTagOrThrow(std::string_view name, const std::string& location) {
  std::optional<PosTag> tag = ParseTag(name);
  if (!tag) {
    throw Error(ErrorKind::kInvalidTag,
                "'" + std::string(name) + "' at " + location);
  }
  return *tag;
}

std::vector<std::string> ExtractFeatures(std::span<const Token> tokens,
                                         size_t i,
                                         std::string_view prev_tag,
                                         std::string_view prev2_tag) {
  const Token& token = tokens[i];
  const std::string& word = token.surface;
  const std::string& lower = token.lowered;
  std::string_view prev_word = i > 0 ? std::string_view(tokens[i - 1].lowered)
                                     : kStart;
  std::string_view next_word = i + 1 < tokens.size()
                                   ? std::string_view(tokens[i + 1].lowered)
                                   : kEnd;

  std::vector<std::string> features;
  features.reserve(16);
  auto add = [&](std::string_view name, std::string_view value) {
    std::string f(name);
    f += ' ';
    f += value;
    features.push_back(std::move(f));
  };
  features.emplace_back("bias");
  add("w", word);
  add("l", lower);
  add("s1", Suffix(lower, 1));
  add("s2", Suffix(lower, 2));
  add("s3", Suffix(lower, 3));
  add("f", FirstChar(word));
  add("t1", prev_tag);
  add("t12", std::string(prev_tag) + " " + std::string(prev2_tag));
  add("pw", prev_word);
  add("nw", next_word);
  if (!word.empty() && word[0] >= 'A' && word[0] <= 'Z') {
    features.emplace_back("shape cap");
  }
  if (word.find_first_of("0123456789") != std::string::npos) {
    features.emplace_back("shape digit");
  }
  if (word.find('-') != std::string::npos) {
    features.emplace_back("shape hyphen");
  }
  return features;
}

PosTag TaggerModel::Predict(const std::vector<std::string>& features) const {
  Weights scores{};
  for (const std::string& feature : features) {
    auto it = weights_.find(feature);
    if (it == weights_.end()) continue;
    for (size_t t = 0; t < kNumTags; ++t) scores[t] += it->second[t];
  }
  size_t best = 0;
  for (size_t t = 1; t < kNumTags; ++t) {
    if (scores[t] > scores[best]) best = t;
  }
  return static_cast<PosTag>(best);
}

TaggerModel TaggerModel::Train(std::span<const TaggedSentence> treebank,
                               const TrainingOptions& options) {
  if (treebank.empty()) {
    throw Error(ErrorKind::kEmptyTrainingSet, "treebank has no sentences");
  }
  if (options.epochs < 1) {
    throw Error(ErrorKind::kInvalidConfig, "epochs must be >= 1");
  }

  TaggerModel model;
  model.seed_ = options.seed;
  model.epochs_ = options.epochs;

  std::map<std::string, std::array<size_t, kNumTags>> counts;
  for (const TaggedSentence& s : treebank) {
    if (s.tags.size() != s.sentence.tokens.size()) {
      throw Error(ErrorKind::kMalformedRow,
                  "sentence '" + s.sentence.id + "' has " +
                      std::to_string(s.tags.size()) + " tags for " +
                      std::to_string(s.sentence.tokens.size()) + " tokens");
    }
    for (size_t i = 0; i < s.tags.size(); ++i) {
      auto& row = counts[s.sentence.tokens[i].surface];
      ++row[static_cast<size_t>(s.tags[i])];
    }
  }
  for (const auto& [word, row] : counts) {
    size_t total = std::accumulate(row.begin(), row.end(), size_t{0});
    size_t best = 0;
    for (size_t t = 1; t < kNumTags; ++t) {
      if (row[t] > row[best]) best = t;
    }
    if (total >= options.tagdict_min_count &&
        static_cast<double>(row[best]) / static_cast<double>(total) >=
            options.tagdict_min_purity) {
      model.tagdict_.emplace(word, static_cast<PosTag>(best));
    }
  }

  struct Slot {
    Weights weight{};
    Weights total{};
    std::array<uint64_t, kNumTags> stamp{};
  };
  std::unordered_map<std::string, Slot> slots;
  uint64_t instances = 0;

  auto bump = [&](Slot& slot, size_t tag, double delta) {
    slot.total[tag] +=
        static_cast<double>(instances - slot.stamp[tag]) * slot.weight[tag];
    slot.stamp[tag] = instances;
    slot.weight[tag] += delta;
  };

  auto predict = [&](const std::vector<std::string>& features) {
    Weights scores{};
    for (const std::string& feature : features) {
      auto it = slots.find(feature);
      if (it == slots.end()) continue;
      for (size_t t = 0; t < kNumTags; ++t) scores[t] += it->second.weight[t];
    }
    size_t best = 0;
    for (size_t t = 1; t < kNumTags; ++t) {
      if (scores[t] > scores[best]) best = t;
    }
    return best;
  };

  std::mt19937_64 rng(options.seed);
  std::vector<size_t> order(treebank.size());
  std::iota(order.begin(), order.end(), size_t{0});
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Shuffle(order, rng);
    for (size_t index : order) {
      const TaggedSentence& s = treebank[index];
      std::span<const Token> tokens = s.sentence.tokens;
      std::string_view prev = kStart, prev2 = kStart2;
      for (size_t i = 0; i < tokens.size(); ++i) {
        size_t gold = static_cast<size_t>(s.tags[i]);
        size_t guess;
        auto dict = model.tagdict_.find(tokens[i].surface);
        if (dict != model.tagdict_.end()) {
          guess = static_cast<size_t>(dict->second);
        } else {
          std::vector<std::string> features =
              ExtractFeatures(tokens, i, prev, prev2);
          guess = predict(features);
          ++instances;
          if (guess != gold) {
            for (const std::string& feature : features) {
              Slot& slot = slots[feature];
              bump(slot, gold, 1.0);
              bump(slot, guess, -1.0);
            }
          }
        }
        prev2 = prev;
        prev = kTagNames[guess];
      }
    }
  }

  for (auto& [feature, slot] : slots) {
    Weights averaged{};
    bool any = false;
    for (size_t t = 0; t < kNumTags; ++t) {
      double total = slot.total[t] + static_cast<double>(instances -
                                                         slot.stamp[t]) *
                                         slot.weight[t];
      averaged[t] = instances ? total / static_cast<double>(instances) : 0.0;
      if (averaged[t] != 0.0) any = true;
    }
    if (any) model.weights_.emplace(feature, averaged);
  }
  return model;
}

std::vector<PosTag> TaggerModel::Tag(const TokenizedSentence& sentence) const {
  std::span<const Token> tokens = sentence.tokens;
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  std::string_view prev = kStart, prev2 = kStart2;
  for (size_t i = 0; i < tokens.size(); ++i) {
    PosTag tag;
    auto dict = tagdict_.find(tokens[i].surface);
    if (dict != tagdict_.end()) {
      tag = dict->second;
    } else {
      tag = Predict(ExtractFeatures(tokens, i, prev, prev2));
    }
    tags.push_back(tag);
    prev2 = prev;
    prev = TagName(tag);
  }
  return tags;
}

std::string TaggerModel::Serialize() const {
  std::string out(kMagic);
  out += "\nseed " + std::to_string(seed_);
  out += "\nepochs " + std::to_string(epochs_);
  out += "\ntagdict " + std::to_string(tagdict_.size()) + "\n";
  for (const auto& [word, tag] : tagdict_) {
    out += std::to_string(word.size()) + ":" + word + " ";
    out += TagName(tag);
    out += "\n";
  }
  out += "weights " + std::to_string(weights_.size()) + "\n";
  for (const auto& [feature, row] : weights_) {
    size_t nonzero = 0;
    for (double w : row) nonzero += w != 0.0;
    out += std::to_string(feature.size()) + ":" + feature + " " +
           std::to_string(nonzero);
    for (size_t t = 0; t < kNumTags; ++t) {
      if (row[t] == 0.0) continue;
      out += " ";
      out += kTagNames[t];
      out += "=" + FormatDouble(row[t]);
    }
    out += "\n";
  }
  return out;
}

TaggerModel TaggerModel::Deserialize(std::string_view bytes) {
  Reader reader(bytes);
  if (reader.Line() != kMagic) Reader::Fail("bad magic line");
  TaggerModel model;
  model.seed_ = reader.Header("seed");
  model.epochs_ = static_cast<int>(reader.Header("epochs"));

  uint64_t entries = reader.Header("tagdict");
  for (uint64_t i = 0; i < entries; ++i) {
    std::string word = reader.LengthPrefixed();
    model.tagdict_.emplace(std::move(word), TagFromModel(reader.Line()));
  }

  uint64_t features = reader.Header("weights");
  for (uint64_t i = 0; i < features; ++i) {
    std::string feature = reader.LengthPrefixed();
    std::string line(reader.Line());
    Weights row{};
    size_t space = line.find(' ');
    uint64_t nonzero = Reader::ParseUnsigned(std::string_view(line).substr(
        0, space == std::string::npos ? line.size() : space));
    for (uint64_t k = 0; k < nonzero; ++k) {
      if (space == std::string::npos) Reader::Fail("missing weight");
      size_t next = line.find(' ', space + 1);
      std::string item = line.substr(
          space + 1, next == std::string::npos ? std::string::npos
                                               : next - space - 1);
      size_t eq = item.find('=');
      if (eq == std::string::npos) Reader::Fail("bad weight '" + item + "'");
      PosTag tag = TagFromModel(std::string_view(item).substr(0, eq));
      const char* begin = item.c_str() + eq + 1;
      char* end = nullptr;
      double value = std::strtod(begin, &end);
      if (end == begin || *end != '\0' || !std::isfinite(value)) {
        Reader::Fail("bad weight value '" + item + "'");
      }
      row[static_cast<size_t>(tag)] = value;
      space = next;
    }
    if (space != std::string::npos) Reader::Fail("trailing weights");
    model.weights_.emplace(std::move(feature), row);
  }
  if (!reader.AtEnd()) Reader::Fail("trailing bytes");
  return model;
}

void TaggerModel::Save(const std::string& path) const {
  WriteFileAtomic(path, Serialize());
}

TaggerModel TaggerModel::Load(const std::string& path) {
  return Deserialize(ReadFile(path));
}

std::string TaggerModel::Hash() const { return Sha256Hex(Serialize()); }

}  // namespace tlab

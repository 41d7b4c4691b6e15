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

// Ten-column tab-separated treebank interchange files. Only FORM (column 2)
// and UPOS (column 4) are consulted.

#ifndef TLAB_CONLLU_H_
#define TLAB_CONLLU_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/postag.h"

namespace tlab {

// Sentences are separated by blank lines; "#" lines are comments, and a
// "# sent_id = X" comment names the sentence (default "S<k>"). Multiword
// ranges ("3-4") and empty nodes ("5.1") are skipped. Throws MalformedRow
// or InvalidTag with "<source>:<line>".
std::vector<TaggedSentence> ParsePretagged(std::string_view contents,
                                           const std::string& source);
std::vector<TaggedSentence> LoadPretagged(const std::string& path);

std::string SerializePretagged(std::span<const TaggedSentence> sentences);
void SavePretagged(std::span<const TaggedSentence> sentences,
                   const std::string& path);

}  // namespace tlab

#endif  // TLAB_CONLLU_H_

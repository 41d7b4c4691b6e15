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

#include "tlab/error.h"

#include <utility>

namespace tlab {

std::string_view KindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptySentence: return "EmptySentence";
    case ErrorKind::kFileNotFound: return "FileNotFound";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kMalformedCorpus: return "MalformedCorpus";
    case ErrorKind::kDuplicateId: return "DuplicateId";
    case ErrorKind::kIdMismatch: return "IdMismatch";
    case ErrorKind::kInvalidTag: return "InvalidTag";
    case ErrorKind::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::kMalformedRow: return "MalformedRow";
    case ErrorKind::kMalformedModel: return "MalformedModel";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kUnbalancedParens: return "UnbalancedParens";
    case ErrorKind::kDuplicateVariable: return "DuplicateVariable";
    case ErrorKind::kUndefinedVariable: return "UndefinedVariable";
    case ErrorKind::kMalformedPenman: return "MalformedPenman";
    case ErrorKind::kInvalidGraph: return "InvalidGraph";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kEmptyLexicon: return "EmptyLexicon";
    case ErrorKind::kUntaggedToken: return "UntaggedToken";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kBackendUnavailable: return "BackendUnavailable";
    case ErrorKind::kBatchTimeout: return "BatchTimeout";
    case ErrorKind::kProtocolViolation: return "ProtocolViolation";
    case ErrorKind::kInvalidIntermediate: return "InvalidIntermediate";
    case ErrorKind::kMissingSystemOutput: return "MissingSystemOutput";
    case ErrorKind::kInvalidJudgment: return "InvalidJudgment";
    case ErrorKind::kDuplicateJudgment: return "DuplicateJudgment";
    case ErrorKind::kScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorKind::kUnpairedJudgments: return "UnpairedJudgments";
    case ErrorKind::kProvenanceMismatch: return "ProvenanceMismatch";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(KindName(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail) {}

namespace {

std::string DescribeMismatch(const std::vector<std::string>& missing,
                             const std::vector<std::string>& extra) {
  std::string out = "missing=[";
  for (size_t i = 0; i < missing.size(); ++i) {
    if (i) out += ",";
    out += missing[i];
  }
  out += "] extra=[";
  for (size_t i = 0; i < extra.size(); ++i) {
    if (i) out += ",";
    out += extra[i];
  }
  return out + "]";
}

}  // namespace

IdMismatchError::IdMismatchError(std::vector<std::string> missing,
                                 std::vector<std::string> extra)
    : Error(ErrorKind::kIdMismatch, DescribeMismatch(missing, extra)),
      missing_(std::move(missing)),
      extra_(std::move(extra)) {}

PenmanError::PenmanError(ErrorKind kind, size_t position,
                         const std::string& detail)
    : Error(kind, detail + " at offset " + std::to_string(position)),
      position_(position) {}

}  // namespace tlab

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

#ifndef TLAB_ERROR_H_
#define TLAB_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tlab {

// Every domain failure the toolkit reports. The CLI maps these to exit
// status 1 and prints "<Kind>: <detail>" on stderr.
enum class ErrorKind {
  kEmptySentence,
  kFileNotFound,
  kIoError,
  kMalformedCorpus,
  kDuplicateId,
  kIdMismatch,
  kInvalidTag,
  kEmptyTrainingSet,
  kMalformedRow,
  kMalformedModel,
  kEmptyInput,
  kUnbalancedParens,
  kDuplicateVariable,
  kUndefinedVariable,
  kMalformedPenman,
  kInvalidGraph,
  kEmptyCorpus,
  kEmptyLexicon,
  kUntaggedToken,
  kInvalidConfig,
  kBackendUnavailable,
  kBatchTimeout,
  kProtocolViolation,
  kInvalidIntermediate,
  kMissingSystemOutput,
  kInvalidJudgment,
  kDuplicateJudgment,
  kScoreOutOfRange,
  kUnpairedJudgments,
  kProvenanceMismatch,
};

std::string_view KindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// Raised by corpus alignment; carries the symmetric difference of id sets.
class IdMismatchError : public Error {
 public:
  IdMismatchError(std::vector<std::string> missing,
                  std::vector<std::string> extra);

  // Ids present in the baseline but absent from the output.
  const std::vector<std::string>& missing() const { return missing_; }
  // Ids present in the output but absent from the baseline.
  const std::vector<std::string>& extra() const { return extra_; }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> extra_;
};

// Raised by the PENMAN reader; position is a byte offset into the input.
class PenmanError : public Error {
 public:
  PenmanError(ErrorKind kind, size_t position, const std::string& detail);

  size_t position() const { return position_; }

 private:
  size_t position_;
};

}  // namespace tlab

#endif  // TLAB_ERROR_H_

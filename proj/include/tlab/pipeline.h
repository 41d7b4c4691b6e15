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

// Drives a rewriting backend over a corpus: cache lookup, bounded in-flight
// batches, per-batch timeouts, retries, and validation of intermediate AMR
// graphs returned by parse-then-generate backends.

#ifndef TLAB_PIPELINE_H_
#define TLAB_PIPELINE_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlab/backend_spec.h"
#include "tlab/cache.h"
#include "tlab/corpus.h"
#include "tlab/transport.h"

namespace tlab {

struct ReductionRecord {
  std::string id;
  std::string input_text;
  std::string output_text;
  std::optional<std::string> intermediate;  // PENMAN, AMR backends only
  std::string backend_id;
  std::string backend_version;
  bool cache_hit = false;
  double latency_ms = 0.0;
  int attempts = 0;
  std::vector<std::string> warnings;
};

struct FailedSentence {
  std::string id;
  std::string reason;
};

struct PipelineOptions {
  // Rewrite intermediates with inverse roles normalized before recording.
  bool normalize_intermediate = false;
  // Called once per committed record, in commit order.
  std::function<void(const ReductionRecord&)> on_commit;
};

struct PipelineResult {
  Corpus output;  // role system_output, baseline order, failures excluded
  std::vector<ReductionRecord> records;  // input order
  std::vector<FailedSentence> failed;    // input order
  std::string backend_version;
  size_t cache_hits = 0;
  size_t dispatched = 0;  // rewrite requests sent, retries included
};

// Throws BackendUnavailable, ProtocolViolation. Sentences still failing
// after spec.max_retries retries are listed in `failed`.
PipelineResult RunPipeline(const Corpus& input, const BackendSpec& spec,
                           const ResponseCache& cache, Transport& transport,
                           const PipelineOptions& options = {});

// Warnings: "DegenerateGraph" (fewer than 2 nodes for an input longer than
// 5 tokens), "EmptyGeneration". Throws InvalidIntermediate when the PENMAN
// does not parse.
std::vector<std::string> ValidateIntermediate(const ReductionRecord& record);

nlohmann::ordered_json ToJson(const ReductionRecord& record);

}  // namespace tlab

#endif  // TLAB_PIPELINE_H_

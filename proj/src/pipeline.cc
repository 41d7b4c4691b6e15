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

#include "tlab/pipeline.h"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "tlab/error.h"
#include "tlab/penman.h"
#include "tlab/textnorm.h"

namespace tlab {
namespace {

// Sentences with identical text share one request and one cache entry.
struct Group {
  std::string key;
  std::string text;
  std::string request_id;
  std::vector<size_t> members;
  int attempts = 0;
  long batch = -1;  // serial of the batch carrying it, or -1
  Clock::time_point sent_at;
};

struct Batch {
  std::vector<size_t> groups;
  Clock::time_point deadline;
};

bool IsBlankText(const std::string& text) {
  return text.find_first_not_of(" \t\r\n\v\f") == std::string::npos;
}

class Dispatcher {
 public:
  Dispatcher(const Corpus& input, const BackendSpec& spec,
             const ResponseCache& cache, Transport& transport,
             const PipelineOptions& options)
      : input_(input),
        spec_(spec),
        cache_(cache),
        transport_(transport),
        options_(options),
        timeout_(std::chrono::duration_cast<Clock::duration>(
            std::chrono::duration<double>(spec.timeout_seconds))),
        records_(input.size()),
        failures_(input.size()) {}

  PipelineResult Run() {
    Handshake();
    Plan();
    while (!pending_.empty() || !batches_.empty()) {
      try {
        Step();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kBackendUnavailable) throw;
        // The worker died; nothing in flight will come back.
        Abandon(e.what(), [](const Batch&) { return true; });
        transport_.Restart();
        Handshake();
      }
    }
    return Finish();
  }

 private:
  void Handshake() {
    tlab::Handshake hello = transport_.Hello(Clock::now() + timeout_);
    if (hello.backend != spec_.id) {
      throw Error(ErrorKind::kProtocolViolation,
                  "worker reports backend '" + hello.backend +
                      "', expected '" + spec_.id + "'");
    }
    if (!version_.empty() && hello.version != version_) {
      throw Error(ErrorKind::kProtocolViolation,
                  "worker version changed from '" + version_ + "' to '" +
                      hello.version + "' mid-run");
    }
    version_ = hello.version;
  }

  void Plan() {
    std::unordered_map<std::string, size_t> by_key;
    for (size_t i = 0; i < input_.size(); ++i) {
      const Sentence& s = input_.sentences[i];
      std::string key = CacheKey(spec_.id, version_, s.text);
      if (std::optional<std::string> cached = cache_.Get(key)) {
        if (CommitCached(i, *cached)) continue;
      }
      auto [it, inserted] = by_key.emplace(key, groups_.size());
      if (inserted) {
        Group group;
        group.key = key;
        group.text = s.text;
        group.request_id = s.id;
        groups_.push_back(std::move(group));
        by_request_.emplace(s.id, it->second);
        pending_.push_back(it->second);
      }
      groups_[it->second].members.push_back(i);
    }
  }

  bool CommitCached(size_t index, const std::string& cached) {
    try {
      RewriteResponse response = DecodeResponse(cached);
      ReductionRecord record = Accept(response, input_.sentences[index].id,
                                      input_.sentences[index].text);
      record.cache_hit = true;
      ++cache_hits_;
      Commit(index, std::move(record));
      return true;
    } catch (const Error&) {
      return false;  // unreadable entry; fetch it again
    }
  }

  void Step() {
    while (batches_.size() < spec_.max_in_flight && !pending_.empty()) {
      long serial = next_batch_++;
      Batch& batch = batches_[serial];
      batch.deadline = Clock::now() + timeout_;
      while (batch.groups.size() < spec_.batch_size && !pending_.empty()) {
        size_t g = pending_.front();
        pending_.pop_front();
        Group& group = groups_[g];
        group.batch = serial;
        group.sent_at = Clock::now();
        batch.groups.push_back(g);
        ++dispatched_;
        transport_.Send({group.request_id, group.text}, batch.deadline);
      }
    }

    Clock::time_point earliest = Clock::time_point::max();
    for (const auto& [serial, batch] : batches_) {
      earliest = std::min(earliest, batch.deadline);
    }
    std::optional<RewriteResponse> response = transport_.Receive(earliest);
    if (!response) {
      Clock::time_point now = Clock::now();
      Abandon("BatchTimeout", [now](const Batch& b) { return b.deadline <= now; });
      transport_.Restart();
      Handshake();
      return;
    }

    auto found = by_request_.find(response->id);
    if (found == by_request_.end()) {
      throw Error(ErrorKind::kProtocolViolation,
                  "response for unknown id '" + response->id + "'");
    }
    Group& group = groups_[found->second];
    if (group.batch < 0) return;  // stale duplicate
    auto batch = batches_.find(group.batch);
    std::erase(batch->second.groups, found->second);
    if (batch->second.groups.empty()) batches_.erase(batch);
    group.batch = -1;

    try {
      ReductionRecord record = Accept(*response, group.request_id, group.text);
      cache_.Put(group.key, response->raw);
      record.latency_ms = std::chrono::duration<double, std::milli>(
                              Clock::now() - group.sent_at)
                              .count();
      record.attempts = group.attempts + 1;
      for (size_t index : group.members) Commit(index, record);
    } catch (const Error& e) {
      Retry(found->second, e.what());
    }
  }

  // Requeues every in-flight group. Groups in batches matching `penalize`
  // use up an attempt; the rest go back untouched.
  template <typename Predicate>
  void Abandon(const std::string& reason, Predicate penalize) {
    std::vector<std::pair<size_t, bool>> groups;
    for (const auto& [serial, batch] : batches_) {
      bool charged = penalize(batch);
      for (size_t g : batch.groups) groups.emplace_back(g, charged);
    }
    batches_.clear();
    std::sort(groups.begin(), groups.end());
    for (const auto& [g, charged] : groups) {
      groups_[g].batch = -1;
      if (charged) {
        Retry(g, reason);
      } else {
        pending_.push_front(g);
      }
    }
  }

  void Retry(size_t g, const std::string& reason) {
    Group& group = groups_[g];
    ++group.attempts;
    if (group.attempts > spec_.max_retries) {
      for (size_t index : group.members) failures_[index] = reason;
    } else {
      pending_.push_back(g);
    }
  }

  ReductionRecord Accept(const RewriteResponse& response, const std::string& id,
                         const std::string& input_text) const {
    if (response.error) {
      throw Error(ErrorKind::kProtocolViolation,
                  "worker error: " + *response.error);
    }
    ReductionRecord record;
    record.id = id;
    record.input_text = input_text;
    record.backend_id = spec_.id;
    record.backend_version = version_;
    record.output_text = response.text.value_or("");
    record.intermediate = response.intermediate;
    if (IsBlankText(record.output_text)) {
      throw Error(ErrorKind::kProtocolViolation, "EmptyGeneration");
    }
    record.warnings = ValidateIntermediate(record);
    if (record.intermediate && options_.normalize_intermediate) {
      record.intermediate =
          SerializePenman(NormalizeInverseRoles(ParsePenman(*record.intermediate)));
    }
    return record;
  }

  void Commit(size_t index, ReductionRecord record) {
    record.id = input_.sentences[index].id;
    records_[index] = std::move(record);
    if (options_.on_commit) options_.on_commit(*records_[index]);
  }

  PipelineResult Finish() {
    PipelineResult result;
    result.backend_version = version_;
    result.cache_hits = cache_hits_;
    result.dispatched = dispatched_;
    result.output.name = spec_.id;
    result.output.role = CorpusRole::kSystemOutput;
    result.output.system_id = spec_.id;
    for (size_t i = 0; i < input_.size(); ++i) {
      if (records_[i]) {
        result.output.sentences.push_back(
            {input_.sentences[i].id, records_[i]->output_text});
        result.records.push_back(std::move(*records_[i]));
      } else {
        result.failed.push_back(
            {input_.sentences[i].id, failures_[i].value_or("not attempted")});
      }
    }
    return result;
  }

  const Corpus& input_;
  const BackendSpec& spec_;
  const ResponseCache& cache_;
  Transport& transport_;
  const PipelineOptions& options_;
  Clock::duration timeout_;
  std::string version_;

  std::vector<Group> groups_;
  std::unordered_map<std::string, size_t> by_request_;
  std::deque<size_t> pending_;
  std::map<long, Batch> batches_;
  long next_batch_ = 0;

  std::vector<std::optional<ReductionRecord>> records_;
  std::vector<std::optional<std::string>> failures_;
  size_t cache_hits_ = 0;
  size_t dispatched_ = 0;
};

}  // namespace

PipelineResult RunPipeline(const Corpus& input, const BackendSpec& spec,
                           const ResponseCache& cache, Transport& transport,
                           const PipelineOptions& options) {
  ValidateBackendSpec(spec);
  return Dispatcher(input, spec, cache, transport, options).Run();
}

std::vector<std::string> ValidateIntermediate(const ReductionRecord& record) {
  std::vector<std::string> warnings;
  if (record.intermediate) {
    AmrGraph graph;
    try {
      graph = ParsePenman(*record.intermediate);
    } catch (const Error& e) {
      throw Error(ErrorKind::kInvalidIntermediate,
                  "sentence '" + record.id + "': " + e.what());
    }
    size_t input_tokens = 0;
    if (!IsBlankText(record.input_text)) {
      input_tokens = Tokenize(record.input_text).tokens.size();
    }
    if (graph.nodes.size() < 2 && input_tokens > 5) {
      warnings.push_back("DegenerateGraph");
    }
  }
  if (IsBlankText(record.output_text)) warnings.push_back("EmptyGeneration");
  return warnings;
}

nlohmann::ordered_json ToJson(const ReductionRecord& record) {
  nlohmann::ordered_json out;
  out["id"] = record.id;
  out["input_text"] = record.input_text;
  out["output_text"] = record.output_text;
  out["intermediate"] = record.intermediate
                            ? nlohmann::ordered_json(*record.intermediate)
                            : nlohmann::ordered_json(nullptr);
  out["backend_id"] = record.backend_id;
  out["backend_version"] = record.backend_version;
  out["cache_hit"] = record.cache_hit;
  out["latency_ms"] = record.latency_ms;
  out["attempts"] = record.attempts;
  out["warnings"] = record.warnings;
  return out;
}

}  // namespace tlab

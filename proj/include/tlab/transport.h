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

// Worker wire protocol: newline-delimited JSON over a subprocess's
// standard streams, or the same JSON bodies POSTed to one HTTP endpoint.
//
//   -> {"op":"hello"}
//   <- {"op":"hello","backend":"amr-ptg","version":"2024.1"}
//   -> {"op":"rewrite","id":"L1","text":"..."}
//   <- {"op":"result","id":"L1","text":"...","intermediate":"(...)"}
//   <- {"op":"result","id":"L2","error":"model failure"}
//
// Responses may arrive in any order.

#ifndef TLAB_TRANSPORT_H_
#define TLAB_TRANSPORT_H_

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tlab/backend_spec.h"

namespace tlab {

using Clock = std::chrono::steady_clock;

struct Handshake {
  std::string backend;
  std::string version;
};

struct RewriteRequest {
  std::string id;
  std::string text;
};

struct RewriteResponse {
  std::string id;
  std::optional<std::string> text;
  std::optional<std::string> intermediate;
  std::optional<std::string> error;
  std::string raw;  // the response line exactly as received
};

std::string EncodeHello();
std::string EncodeRequest(const RewriteRequest& request);
// Throws ProtocolViolation.
Handshake DecodeHandshake(std::string_view line);
RewriteResponse DecodeResponse(std::string_view line);

class Transport {
 public:
  virtual ~Transport() = default;

  // Performs the handshake. Throws BackendUnavailable or ProtocolViolation.
  virtual Handshake Hello(Clock::time_point deadline) = 0;
  virtual void Send(const RewriteRequest& request,
                    Clock::time_point deadline) = 0;
  // Next response, or nullopt once `deadline` passes. Throws
  // BackendUnavailable when the worker has gone away.
  virtual std::optional<RewriteResponse> Receive(
      Clock::time_point deadline) = 0;
  // Drops the current worker (and anything in flight) and starts afresh;
  // Hello must be called again.
  virtual void Restart() = 0;
};

// Runs `command` through /bin/sh in its own process group.
std::unique_ptr<Transport> MakeSubprocessTransport(const std::string& command);
std::unique_ptr<Transport> MakeHttpTransport(const std::string& url,
                                             size_t max_in_flight);
std::unique_ptr<Transport> MakeTransport(const BackendSpec& spec);

}  // namespace tlab

#endif  // TLAB_TRANSPORT_H_

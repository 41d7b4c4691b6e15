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

#include "tlab/transport.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "tlab/error.h"

namespace tlab {

using nlohmann::json;

namespace {

json ParseLine(std::string_view line) {
  json parsed = json::parse(line, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(ErrorKind::kProtocolViolation,
                "not a JSON object: " + std::string(line.substr(0, 200)));
  }
  return parsed;
}

std::optional<std::string> OptionalString(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorKind::kProtocolViolation,
                std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

int MillisUntil(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                  deadline - Clock::now())
                  .count();
  if (left <= 0) return 0;
  return left > 60'000 ? 60'000 : static_cast<int>(left);
}

class SubprocessTransport : public Transport {
 public:
  explicit SubprocessTransport(std::string command)
      : command_(std::move(command)) {
    ::signal(SIGPIPE, SIG_IGN);
    Start();
  }

  ~SubprocessTransport() override { Stop(); }

  Handshake Hello(Clock::time_point deadline) override {
    WriteAll(EncodeHello() + "\n", deadline);
    std::optional<std::string> line = NextLine(deadline);
    if (!line) {
      throw Error(ErrorKind::kBackendUnavailable,
                  "no handshake from '" + command_ + "' before timeout");
    }
    return DecodeHandshake(*line);
  }

  void Send(const RewriteRequest& request,
            Clock::time_point deadline) override {
    WriteAll(EncodeRequest(request) + "\n", deadline);
  }

  std::optional<RewriteResponse> Receive(Clock::time_point deadline) override {
    std::optional<std::string> line = NextLine(deadline);
    if (!line) return std::nullopt;
    return DecodeResponse(*line);
  }

  void Restart() override {
    Stop();
    Start();
  }

 private:
  void Start() {
    int in_pipe[2], out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0) Unavailable("pipe");
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
      ::close(in_pipe[0]);
      ::close(in_pipe[1]);
      Unavailable("pipe");
    }
    pid_t pid = ::fork();
    if (pid < 0) Unavailable("fork");
    if (pid == 0) {
      ::setpgid(0, 0);
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(),
              static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    ::fcntl(to_child_, F_SETFL, ::fcntl(to_child_, F_GETFL) | O_NONBLOCK);
    buffer_.clear();
    eof_ = false;
  }

  void Stop() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
      ::kill(-pid_, SIGKILL);
      ::kill(pid_, SIGKILL);
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }

  [[noreturn]] void Unavailable(const std::string& what) {
    throw Error(ErrorKind::kBackendUnavailable,
                "'" + command_ + "': " + what +
                    (errno ? std::string(": ") + std::strerror(errno) : ""));
  }

  // Reads whatever is available into buffer_; false on timeout.
  bool Fill(int timeout_ms) {
    pollfd fd{from_child_, POLLIN, 0};
    int ready = ::poll(&fd, 1, timeout_ms);
    if (ready < 0 && errno == EINTR) return false;
    if (ready <= 0) return false;
    char chunk[65536];
    ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n > 0) {
      buffer_.append(chunk, static_cast<size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      eof_ = true;
    }
    return true;
  }

  std::optional<std::string> NextLine(Clock::time_point deadline) {
    while (true) {
      size_t newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        return line;
      }
      if (eof_) {
        errno = 0;
        Unavailable("worker closed its output");
      }
      int wait = MillisUntil(deadline);
      if (wait == 0 && Clock::now() >= deadline) {
        // One last non-blocking look before giving up.
        if (!Fill(0)) return std::nullopt;
        continue;
      }
      Fill(wait);
    }
  }

  // Writes everything while draining the worker's output, so neither side
  // can block on a full pipe.
  void WriteAll(const std::string& data, Clock::time_point deadline) {
    size_t written = 0;
    while (written < data.size()) {
      pollfd fds[2] = {{to_child_, POLLOUT, 0}, {from_child_, POLLIN, 0}};
      int wait = MillisUntil(deadline);
      if (wait == 0 && Clock::now() >= deadline) {
        errno = 0;
        Unavailable("write timed out");
      }
      int ready = ::poll(fds, 2, wait);
      if (ready < 0 && errno == EINTR) continue;
      if (ready < 0) Unavailable("poll");
      if (fds[1].revents & (POLLIN | POLLHUP)) Fill(0);
      if (fds[0].revents & (POLLERR | POLLHUP)) {
        errno = 0;
        Unavailable("worker closed its input");
      }
      if (fds[0].revents & POLLOUT) {
        ssize_t n = ::write(to_child_, data.data() + written,
                            data.size() - written);
        if (n > 0) {
          written += static_cast<size_t>(n);
        } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
          Unavailable("write");
        }
      }
    }
  }

  std::string command_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl SplitUrl(const std::string& url) {
  size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorKind::kInvalidConfig, "url '" + url + "' lacks a scheme");
  }
  size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

class HttpTransport : public Transport {
 public:
  HttpTransport(const std::string& url, size_t threads)
      : url_(SplitUrl(url)) {
    for (size_t i = 0; i < std::max<size_t>(threads, 1); ++i) {
      workers_.emplace_back([this] { WorkerLoop(); });
    }
  }

  ~HttpTransport() override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stopping_ = true;
    }
    requests_ready_.notify_all();
    for (std::thread& t : workers_) t.join();
  }

  Handshake Hello(Clock::time_point deadline) override {
    httplib::Client client(url_.origin);
    SetTimeouts(client, deadline);
    auto result = client.Post(url_.path, EncodeHello(), "application/json");
    if (!result) {
      throw Error(ErrorKind::kBackendUnavailable,
                  url_.origin + url_.path + ": " +
                      httplib::to_string(result.error()));
    }
    if (result->status != 200) {
      throw Error(ErrorKind::kBackendUnavailable,
                  url_.origin + url_.path + ": HTTP " +
                      std::to_string(result->status));
    }
    return DecodeHandshake(result->body);
  }

  void Send(const RewriteRequest& request,
            Clock::time_point deadline) override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      requests_.push_back({request, deadline, generation_});
    }
    requests_ready_.notify_one();
  }

  std::optional<RewriteResponse> Receive(Clock::time_point deadline) override {
    std::unique_lock<std::mutex> lock(mutex_);
    responses_ready_.wait_until(lock, deadline,
                                [this] { return !responses_.empty(); });
    if (responses_.empty()) return std::nullopt;
    Outcome outcome = std::move(responses_.front());
    responses_.pop_front();
    if (outcome.error) std::rethrow_exception(outcome.error);
    return std::move(outcome.response);
  }

  void Restart() override {
    std::lock_guard<std::mutex> lock(mutex_);
    ++generation_;
    requests_.clear();
    responses_.clear();
  }

 private:
  struct Pending {
    RewriteRequest request;
    Clock::time_point deadline;
    uint64_t generation;
  };
  struct Outcome {
    RewriteResponse response;
    std::exception_ptr error;
  };

  static void SetTimeouts(httplib::Client& client,
                          Clock::time_point deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() < 1) left = std::chrono::milliseconds(1);
    client.set_connection_timeout(left);
    client.set_read_timeout(left);
    client.set_write_timeout(left);
  }

  void WorkerLoop() {
    while (true) {
      Pending pending;
      {
        std::unique_lock<std::mutex> lock(mutex_);
        requests_ready_.wait(lock,
                             [this] { return stopping_ || !requests_.empty(); });
        if (stopping_) return;
        pending = std::move(requests_.front());
        requests_.pop_front();
      }
      Outcome outcome;
      httplib::Client client(url_.origin);
      SetTimeouts(client, pending.deadline);
      auto result = client.Post(url_.path, EncodeRequest(pending.request),
                                "application/json");
      if (!result || result->status != 200) {
        // Transport failures surface as per-sentence errors so the
        // dispatcher's retry policy applies.
        json synthetic = {{"op", "result"},
                          {"id", pending.request.id},
                          {"error", result ? "HTTP " +
                                                 std::to_string(result->status)
                                           : httplib::to_string(
                                                 result.error())}};
        outcome.response = DecodeResponse(synthetic.dump());
      } else {
        try {
          outcome.response = DecodeResponse(result->body);
        } catch (...) {
          outcome.error = std::current_exception();
        }
      }
      {
        std::lock_guard<std::mutex> lock(mutex_);
        if (pending.generation != generation_) continue;
        responses_.push_back(std::move(outcome));
      }
      responses_ready_.notify_one();
    }
  }

  ParsedUrl url_;
  std::mutex mutex_;
  std::condition_variable requests_ready_;
  std::condition_variable responses_ready_;
  std::deque<Pending> requests_;
  std::deque<Outcome> responses_;
  uint64_t generation_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace

std::string EncodeHello() { return json{{"op", "hello"}}.dump(); }

std::string EncodeRequest(const RewriteRequest& request) {
  json message;
  message["op"] = "rewrite";
  message["id"] = request.id;
  message["text"] = request.text;
  return message.dump();
}

Handshake DecodeHandshake(std::string_view line) {
  json message = ParseLine(line);
  if (message.value("op", "") != "hello") {
    throw Error(ErrorKind::kProtocolViolation,
                "expected hello, got: " + std::string(line.substr(0, 200)));
  }
  std::optional<std::string> backend = OptionalString(message, "backend");
  std::optional<std::string> version = OptionalString(message, "version");
  if (!backend || !version) {
    throw Error(ErrorKind::kProtocolViolation,
                "hello must carry backend and version");
  }
  return {*backend, *version};
}

RewriteResponse DecodeResponse(std::string_view line) {
  json message = ParseLine(line);
  auto op = message.find("op");
  if (op == message.end() || !op->is_string() || *op != "result") {
    throw Error(ErrorKind::kProtocolViolation,
                "expected result, got: " + std::string(line.substr(0, 200)));
  }
  RewriteResponse response;
  std::optional<std::string> id = OptionalString(message, "id");
  if (!id) throw Error(ErrorKind::kProtocolViolation, "result without id");
  response.id = *id;
  response.text = OptionalString(message, "text");
  response.intermediate = OptionalString(message, "intermediate");
  response.error = OptionalString(message, "error");
  response.raw = std::string(line);
  return response;
}

std::unique_ptr<Transport> MakeSubprocessTransport(const std::string& command) {
  return std::make_unique<SubprocessTransport>(command);
}

std::unique_ptr<Transport> MakeHttpTransport(const std::string& url,
                                             size_t max_in_flight) {
  return std::make_unique<HttpTransport>(url, max_in_flight);
}

std::unique_ptr<Transport> MakeTransport(const BackendSpec& spec) {
  if (spec.transport == TransportKind::kHttp) {
    return MakeHttpTransport(spec.url, spec.max_in_flight);
  }
  return MakeSubprocessTransport(spec.command);
}

}  // namespace tlab

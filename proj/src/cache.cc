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

#include "tlab/cache.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tlab/error.h"
#include "tlab/hash.h"

namespace tlab {
namespace {

void AppendFramed(std::string& out, std::string_view field) {
  uint64_t length = field.size();
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((length >> shift) & 0xff));
  }
  out.append(field);
}

}  // namespace

std::string CacheKey(std::string_view backend_id,
                     std::string_view backend_version,
                     std::string_view input_text) {
  std::string framed;
  framed.reserve(24 + backend_id.size() + backend_version.size() +
                 input_text.size());
  AppendFramed(framed, backend_id);
  AppendFramed(framed, backend_version);
  AppendFramed(framed, input_text);
  return Sha256Hex(framed);
}

ResponseCache::ResponseCache(std::string directory)
    : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) {
    throw Error(ErrorKind::kIoError,
                "cannot create cache directory " + directory_ + ": " +
                    ec.message());
  }
}

std::string ResponseCache::PathFor(const std::string& key) const {
  return (std::filesystem::path(directory_) / (key + ".json")).string();
}

std::optional<std::string> ResponseCache::Get(const std::string& key) const {
  std::ifstream in(PathFor(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void ResponseCache::Put(const std::string& key,
                        std::string_view response) const {
  WriteFileAtomic(PathFor(key), response);
}

size_t ResponseCache::Size() const {
  size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(directory_)) {
    if (entry.path().extension() == ".json") ++count;
  }
  return count;
}

}  // namespace tlab

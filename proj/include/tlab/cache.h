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

#ifndef TLAB_CACHE_H_
#define TLAB_CACHE_H_

#include <optional>
#include <string>
#include <string_view>

namespace tlab {

// SHA-256 over the three fields, each framed by its length as 8 big-endian
// bytes, so ("ab","c") and ("a","bc") cannot collide by concatenation.
std::string CacheKey(std::string_view backend_id,
                     std::string_view backend_version,
                     std::string_view input_text);

// A directory of "<hex key>.json" files, each holding one worker response
// line verbatim. Writes are atomic renames, so a killed run leaves only
// complete entries behind.
class ResponseCache {
 public:
  explicit ResponseCache(std::string directory);

  std::optional<std::string> Get(const std::string& key) const;
  void Put(const std::string& key, std::string_view response) const;
  size_t Size() const;
  const std::string& directory() const { return directory_; }

 private:
  std::string PathFor(const std::string& key) const;

  std::string directory_;
};

}  // namespace tlab

#endif  // TLAB_CACHE_H_

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

#ifndef TLAB_HASH_H_
#define TLAB_HASH_H_

#include <string>
#include <string_view>

namespace tlab {

// Lowercase hex SHA-256 digest of `data`.
std::string Sha256Hex(std::string_view data);

// Reads the whole file; throws FileNotFound when it cannot be opened.
std::string ReadFile(const std::string& path);

// Writes via a temporary sibling and rename(2) so readers never see a
// partially written file.
void WriteFileAtomic(const std::string& path, std::string_view contents);

}  // namespace tlab

#endif  // TLAB_HASH_H_

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

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "support/test_support.h"
#include "tlab/hash.h"

namespace tlab {
namespace {

std::string Frame(std::string_view field) {
  std::string out;
  uint64_t n = field.size();
  for (int shift = 56; shift >= 0; shift -= 8) {
    out += static_cast<char>((n >> shift) & 0xff);
  }
  return out + std::string(field);
}

TEST(CacheKeyTest, Deterministic) {
  EXPECT_EQ(CacheKey("amr", "1.0", "text"), CacheKey("amr", "1.0", "text"));
  EXPECT_EQ(CacheKey("amr", "1.0", "text").size(), 64u);
}

TEST(CacheKeyTest, EveryFieldMatters) {
  std::set<std::string> keys = {
      CacheKey("amr", "1.0", "text"), CacheKey("amr", "1.1", "text"),
      CacheKey("mt", "1.0", "text"), CacheKey("amr", "1.0", "text.")};
  EXPECT_EQ(keys.size(), 4u);
}

TEST(CacheKeyTest, FramingPreventsCollisions) {
  // Plain concatenation would make each pair identical.
  EXPECT_NE(CacheKey("b", "ab", "c"), CacheKey("b", "a", "bc"));
  EXPECT_NE(CacheKey("ab", "c", "x"), CacheKey("a", "bc", "x"));
  EXPECT_NE(CacheKey("", "ab", ""), CacheKey("ab", "", ""));
  EXPECT_EQ(Sha256Hex(std::string("b") + "ab" + "c"),
            Sha256Hex(std::string("b") + "a" + "bc"));
}

TEST(CacheKeyTest, MatchesLengthPrefixedDigest) {
  EXPECT_EQ(CacheKey("amr", "1.0", "hi"),
            Sha256Hex(Frame("amr") + Frame("1.0") + Frame("hi")));
}

TEST(Sha256Test, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ResponseCacheTest, PutGetSize) {
  testing::TempDir dir;
  ResponseCache cache(dir.Join("cache"));
  EXPECT_EQ(cache.Size(), 0u);
  std::string key = CacheKey("echo", "1", "hello");
  EXPECT_FALSE(cache.Get(key));
  cache.Put(key, R"({"op":"result","id":"L1","text":"hello"})");
  EXPECT_EQ(cache.Get(key), R"({"op":"result","id":"L1","text":"hello"})");
  EXPECT_EQ(cache.Size(), 1u);
  EXPECT_TRUE(std::filesystem::exists(dir.Join("cache/" + key + ".json")));
  cache.Put(key, "second");
  EXPECT_EQ(cache.Get(key), "second");
  EXPECT_EQ(cache.Size(), 1u);
  // Another instance over the same directory sees the same entries.
  EXPECT_EQ(ResponseCache(dir.Join("cache")).Get(key), "second");
}

}  // namespace
}  // namespace tlab

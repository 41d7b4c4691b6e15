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

#include "tlab/textnorm.h"

#include <algorithm>

#include "tlab/error.h"

namespace tlab {
namespace {

struct CodePoint {
  char32_t value;
  std::string_view bytes;
};

// Malformed sequences decode byte-by-byte so tokenization never fails on
// bad input; they are simply treated as letters.
std::vector<CodePoint> Decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    unsigned char lead = static_cast<unsigned char>(text[i]);
    size_t length = 1;
    char32_t value = lead;
    if (lead >= 0xC0 && lead < 0xE0) {
      length = 2;
      value = lead & 0x1F;
    } else if (lead >= 0xE0 && lead < 0xF0) {
      length = 3;
      value = lead & 0x0F;
    } else if (lead >= 0xF0 && lead < 0xF8) {
      length = 4;
      value = lead & 0x07;
    }
    bool valid = length == 1 || i + length <= text.size();
    for (size_t k = 1; valid && k < length; ++k) {
      unsigned char next = static_cast<unsigned char>(text[i + k]);
      if ((next & 0xC0) != 0x80) valid = false;
      value = (value << 6) | (next & 0x3F);
    }
    if (!valid) {
      length = 1;
      value = lead;
    }
    out.push_back({value, text.substr(i, length)});
    i += length;
  }
  return out;
}

void Encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool IsSpace(char32_t cp) {
  switch (cp) {
    case ' ': case '\t': case '\n': case '\r': case '\v': case '\f':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool IsPunct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0x00A1: case 0x00A7: case 0x00AB: case 0x00B6: case 0x00B7:
    case 0x00BB: case 0x00BF:
      return true;
    default:
      return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E);
  }
}

bool IsApostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }

char32_t FoldCodePoint(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x0137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x0139 && cp <= 0x0148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x014A && cp <= 0x0177 && cp % 2 == 0) return cp + 1;
  if (cp == 0x0178) return 0x00FF;
  if (cp >= 0x0179 && cp <= 0x017E && cp % 2 == 1) return cp + 1;
  if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) return cp + 0x20;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  return cp;
}

using Chunk = std::span<const CodePoint>;

std::string Join(Chunk chunk) {
  std::string out;
  for (const CodePoint& cp : chunk) out.append(cp.bytes);
  return out;
}

bool AllPunct(Chunk chunk) {
  return std::all_of(chunk.begin(), chunk.end(),
                     [](const CodePoint& cp) { return IsPunct(cp.value); });
}

// Length of the clitic suffix ("n't", "'s", "'re", ...) of `chunk`, or 0.
size_t CliticLength(Chunk chunk) {
  auto lower = [&](size_t from_end) -> char32_t {
    return FoldCodePoint(chunk[chunk.size() - from_end].value);
  };
  size_t n = chunk.size();
  if (n >= 3 && lower(3) == 'n' && IsApostrophe(chunk[n - 2].value) &&
      lower(1) == 't') {
    return 3;
  }
  if (n >= 3 && IsApostrophe(chunk[n - 3].value)) {
    char32_t a = lower(2), b = lower(1);
    if ((a == 'r' && b == 'e') || (a == 'v' && b == 'e') ||
        (a == 'l' && b == 'l')) {
      return 3;
    }
  }
  if (n >= 2 && IsApostrophe(chunk[n - 2].value)) {
    char32_t a = lower(1);
    if (a == 's' || a == 'd' || a == 'm') return 2;
  }
  return 0;
}

bool IsClitic(Chunk chunk) {
  return !chunk.empty() && CliticLength(chunk) == chunk.size();
}

// Length of the run of identical code points at the front (or back).
size_t LeadingRun(Chunk chunk) {
  size_t k = 1;
  while (k < chunk.size() && chunk[k].value == chunk[0].value) ++k;
  return k;
}

size_t TrailingRun(Chunk chunk) {
  size_t n = chunk.size(), k = 1;
  while (k < n && chunk[n - 1 - k].value == chunk[n - 1].value) ++k;
  return k;
}

void SplitChunk(Chunk chunk, bool last_chunk, std::vector<std::string>& out) {
  if (AllPunct(chunk)) {
    while (!chunk.empty()) {
      size_t run = LeadingRun(chunk);
      out.push_back(Join(chunk.first(run)));
      chunk = chunk.subspan(run);
    }
    return;
  }

  // Neither loop can consume the whole chunk: it holds a non-punct char.
  std::vector<std::string> trailing;
  while (IsPunct(chunk.back().value)) {
    size_t run = TrailingRun(chunk);
    if (run == 1 && chunk.back().value == '.' && !last_chunk) break;
    trailing.push_back(Join(chunk.last(run)));
    chunk = chunk.first(chunk.size() - run);
  }

  while (IsPunct(chunk.front().value) && !IsClitic(chunk)) {
    size_t run = LeadingRun(chunk);
    out.push_back(Join(chunk.first(run)));
    chunk = chunk.subspan(run);
  }

  size_t clitic = CliticLength(chunk);
  if (clitic > 0 && clitic < chunk.size()) {
    out.push_back(Join(chunk.first(chunk.size() - clitic)));
    out.push_back(Join(chunk.last(clitic)));
  } else {
    out.push_back(Join(chunk));
  }
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

}  // namespace

std::string CaseFold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const CodePoint& cp : Decode(text)) {
    char32_t folded = FoldCodePoint(cp.value);
    if (folded == cp.value) {
      out.append(cp.bytes);
    } else {
      Encode(folded, out);
    }
  }
  return out;
}

Token MakeToken(std::string surface, size_t index) {
  Token token;
  token.lowered = CaseFold(surface);
  token.surface = std::move(surface);
  token.index = index;
  return token;
}

TokenizedSentence Tokenize(std::string_view text, std::string id) {
  std::vector<CodePoint> cps = Decode(text);
  std::vector<Chunk> chunks;
  size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && IsSpace(cps[i].value)) ++i;
    size_t start = i;
    while (i < cps.size() && !IsSpace(cps[i].value)) ++i;
    if (i > start) chunks.push_back(Chunk(cps).subspan(start, i - start));
  }
  if (chunks.empty()) {
    throw Error(ErrorKind::kEmptySentence,
                id.empty() ? std::string("empty sentence") : id);
  }

  std::vector<std::string> surfaces;
  for (size_t c = 0; c < chunks.size(); ++c) {
    SplitChunk(chunks[c], c + 1 == chunks.size(), surfaces);
  }

  TokenizedSentence sentence;
  sentence.id = std::move(id);
  sentence.tokens.reserve(surfaces.size());
  for (size_t k = 0; k < surfaces.size(); ++k) {
    sentence.tokens.push_back(MakeToken(std::move(surfaces[k]), k));
  }
  return sentence;
}

std::string JoinTokens(std::span<const Token> tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out.append(tokens[i].surface);
  }
  return out;
}

std::set<std::string> CasefoldTypes(std::span<const Token> tokens) {
  std::set<std::string> types;
  for (const Token& token : tokens) types.insert(token.lowered);
  return types;
}

}  // namespace tlab

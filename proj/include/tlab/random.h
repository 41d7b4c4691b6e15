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

// Platform-independent seeded randomness. std::uniform_int_distribution and
// std::shuffle are implementation-defined, so outputs derived from a seed
// would differ between standard libraries.

#ifndef TLAB_RANDOM_H_
#define TLAB_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace tlab {

// Unbiased draw in [0, bound). `bound` must be positive.
inline uint64_t Draw(std::mt19937_64& rng, uint64_t bound) {
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Fisher-Yates, last position first.
template <typename T>
void Shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[Draw(rng, i)]);
  }
}

}  // namespace tlab

#endif  // TLAB_RANDOM_H_

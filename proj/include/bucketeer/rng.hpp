// Copyright 2026 The Bucketeer Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace bucketeer {

inline std::uint64_t fnv1a(std::string_view bytes,
                           std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for one bucket's stream: independent of every other bucket and of the
// order buckets are processed in.
inline std::uint64_t derive_seed(std::uint64_t global_seed,
                                 std::string_view problem,
                                 std::string_view bucket_id) noexcept {
  std::uint64_t h = fnv1a(problem);
  h = fnv1a("/", h);
  h = fnv1a(bucket_id, h);
  return splitmix64(global_seed ^ splitmix64(h));
}

// mt19937_64 is fully specified by the standard; the distributions are not,
// so sampling is done here to keep output identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi].
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return lo + static_cast<std::size_t>(next());
    const std::uint64_t limit = ~0ULL - (~0ULL % range);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::size_t>(x % range);
  }

  // True with probability num/den.
  bool chance(std::size_t num, std::size_t den) {
    return uniform(0, den - 1) < num;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform(0, i - 1)]);
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform(0, v.size() - 1)];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bucketeer

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
#include <string>
#include <string_view>

#include "bucketeer/error.hpp"

namespace bucketeer {

// A total truth assignment over a decomposition's subproperties. Bit i holds
// the value of the i-th declared subproperty.
class Bucket {
 public:
  static constexpr std::size_t kMaxWidth = 63;

  Bucket() = default;
  Bucket(std::uint64_t truth, std::size_t width) : width_(width) {
    if (width > kMaxWidth) {
      throw InputError("bucket width " + std::to_string(width) +
                       " exceeds " + std::to_string(kMaxWidth));
    }
    truth_ = truth & mask(width);
  }

  static Bucket all_true(std::size_t width) { return {~0ULL, width}; }
  static Bucket all_false(std::size_t width) { return {0, width}; }

  // Parses a canonical id such as "TTFTFT".
  static Bucket from_id(std::string_view id) {
    std::uint64_t truth = 0;
    for (std::size_t i = 0; i < id.size(); ++i) {
      if (id[i] == 'T') {
        truth |= 1ULL << i;
      } else if (id[i] != 'F') {
        throw InputError("malformed bucket id '" + std::string(id) + "'");
      }
    }
    return {truth, id.size()};
  }

  std::size_t width() const noexcept { return width_; }
  std::uint64_t truth() const noexcept { return truth_; }

  bool operator[](std::size_t i) const noexcept { return (truth_ >> i) & 1U; }

  Bucket with(std::size_t i, bool value) const {
    return {value ? truth_ | (1ULL << i) : truth_ & ~(1ULL << i), width_};
  }

  bool is_all_true() const noexcept { return truth_ == mask(width_); }
  bool is_all_false() const noexcept { return truth_ == 0; }

  std::string id() const {
    std::string out(width_, 'F');
    for (std::size_t i = 0; i < width_; ++i) {
      if ((*this)[i]) out[i] = 'T';
    }
    return out;
  }

  friend bool operator==(const Bucket&, const Bucket&) = default;

  // Same order as comparing canonical ids as strings ('F' < 'T').
  friend bool operator<(const Bucket& a, const Bucket& b) noexcept {
    const std::size_t n = a.width_ < b.width_ ? a.width_ : b.width_;
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] != b[i]) return b[i];
    }
    return a.width_ < b.width_;
  }

 private:
  static constexpr std::uint64_t mask(std::size_t width) noexcept {
    return width >= 64 ? ~0ULL : (1ULL << width) - 1;
  }

  std::uint64_t truth_ = 0;
  std::size_t width_ = 0;
};

enum class Polarity { positive, negative };

inline Polarity classify_bucket(const Bucket& bucket) noexcept {
  return bucket.is_all_true() ? Polarity::positive : Polarity::negative;
}

}  // namespace bucketeer

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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bucketeer {

// A pair, manifest or file that does not have the expected shape.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration refused because the bounded space is larger than allowed.
class BoundsError : public std::runtime_error {
 public:
  BoundsError(std::uint64_t space_size, std::uint64_t ceiling)
      : std::runtime_error("enumeration space of " +
                           std::to_string(space_size) +
                           " pairs exceeds ceiling " +
                           std::to_string(ceiling)),
        space_size_(space_size),
        ceiling_(ceiling) {}

  std::uint64_t space_size() const noexcept { return space_size_; }
  std::uint64_t ceiling() const noexcept { return ceiling_; }

 private:
  std::uint64_t space_size_;
  std::uint64_t ceiling_;
};

}  // namespace bucketeer

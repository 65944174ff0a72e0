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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bucketeer/bucket.hpp"

namespace bucketeer {
namespace {

TEST(Bucket, IdIsTruthStringInDeclarationOrder) {
  Bucket b = Bucket::all_true(6).with(2, false).with(4, false);
  EXPECT_EQ(b.id(), "TTFTFT");
  EXPECT_FALSE(b[2]);
  EXPECT_TRUE(b[3]);
  EXPECT_EQ(Bucket::from_id("TTFTFT"), b);
}

TEST(Bucket, FromIdRejectsOtherLetters) {
  EXPECT_THROW(Bucket::from_id("TXF"), InputError);
  EXPECT_THROW(Bucket::from_id("ttf"), InputError);
}

TEST(Bucket, WidthAboveLimitIsRejected) {
  EXPECT_THROW(Bucket(0, 64), InputError);
  EXPECT_NO_THROW(Bucket(0, 63));
}

TEST(Bucket, Polarity) {
  EXPECT_EQ(classify_bucket(Bucket::all_true(4)), Polarity::positive);
  EXPECT_EQ(classify_bucket(Bucket::from_id("FF")), Polarity::negative);
  EXPECT_EQ(classify_bucket(Bucket::all_false(6)), Polarity::negative);
}

TEST(Bucket, OrderMatchesIdStrings) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t w = 1 + gen() % 8;
    const Bucket a(gen(), w), b(gen(), w);
    EXPECT_EQ(a < b, a.id() < b.id()) << a.id() << " " << b.id();
    EXPECT_EQ(Bucket::from_id(a.id()), a);
  }
}

}  // namespace
}  // namespace bucketeer

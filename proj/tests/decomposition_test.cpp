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
#include <set>

#include "test_support.hpp"

namespace bucketeer {
namespace {

using testing::five_property_topo;
using testing::topo_case;

Decomposition merged() { return manifests::load_builtin("toposortacle-merged"); }

Decomposition with_names(std::size_t n, std::vector<Implication> imps = {}) {
  std::vector<Subproperty> subs;
  for (std::size_t i = 0; i < n; ++i) {
    subs.push_back({"S" + std::to_string(i), SubpropertyKind::core, ""});
  }
  return Decomposition("toposortacle", std::move(subs), std::move(imps));
}

std::set<std::string> ids(const std::vector<Bucket>& buckets) {
  std::set<std::string> out;
  for (const auto& b : buckets) out.insert(b.id());
  return out;
}

TEST(Decomposition, ParsesBuiltinManifests) {
  for (const auto& [name, text] : manifests::builtin()) {
    const auto d = Decomposition::parse(text);
    EXPECT_GE(d.size(), 1u) << name;
    EXPECT_EQ(Decomposition::from_json(d.to_json()).to_json(), d.to_json());
  }
  const auto topo = manifests::load_builtin("toposortacle");
  EXPECT_EQ(topo.size(), 6u);
  EXPECT_EQ(topo.index_of("SORTEDNESS"), 3u);
  EXPECT_EQ(topo[5].kind, SubpropertyKind::error);
  EXPECT_FALSE(topo.find("NOPE").has_value());
  EXPECT_THROW(topo.index_of("NOPE"), InputError);
  EXPECT_THROW(manifests::load_builtin("nope"), InputError);
}

TEST(Decomposition, RejectsMalformedManifests) {
  const char* bad[] = {
      R"({"problem": "toposortacle", "subproperties": []})",
      R"({"problem": "toposortacle", "subproperties": [{"name": "A", "kind": "core"}, {"name": "A", "kind": "core"}]})",
      R"({"problem": "toposortacle", "subproperties": [{"name": "", "kind": "core"}]})",
      R"({"problem": "toposortacle", "subproperties": [{"name": "A", "kind": "odd"}]})",
      R"({"problem": "toposortacle", "subproperties": [{"name": "A", "kind": "core"}], "implications": [{"if": ["B"], "then": "A"}]})",
      R"({"problem": "toposortacle", "subproperties": [{"name": "A", "kind": "core"}], "implications": [{"if": ["A"], "then": "A"}]})",
      R"({"problem": "toposortacle", "subproperties": [{"name": "A", "kind": "core"}, {"name": "B", "kind": "core"}], "implications": [{"if": [], "then": "A"}]})",
      R"(not json)",
  };
  for (const char* text : bad) EXPECT_THROW(Decomposition::parse(text), InputError) << text;
}

TEST(Decomposition, BucketSatisfiedByMergedExamples) {
  const BucketChecker<Toposortacle> checker(merged());
  const auto b1 = Bucket::from_id("FF");
  const auto b3 = Bucket::from_id("FT");
  EXPECT_TRUE(bucket_satisfied_by(checker, b1, topo_case({{1, 2}, {2, 3}}, {1, 2})));
  EXPECT_TRUE(bucket_satisfied_by(checker, b3, topo_case({{1, 2}, {2, 3}}, {1, 2, 2})));
  EXPECT_FALSE(bucket_satisfied_by(checker, b3, topo_case({{1, 2}, {2, 3}}, {1, 2})));
  EXPECT_TRUE(bucket_satisfied_by(checker, Bucket::all_true(2),
                                  topo_case({{1, 2}, {2, 3}}, {1, 2, 3})));
  // A self-loop is malformed, not merely unsatisfying.
  EXPECT_THROW(bucket_satisfied_by(checker, b1, topo_case({{1, 1}}, {1})), InputError);
  EXPECT_THROW(bucket_satisfied_by(checker, Bucket::from_id("FFF"),
                                   topo_case({{1, 2}}, {1})),
               InputError);
}

TEST(Decomposition, ExactlyOneBucketHoldsForEveryPair) {
  const auto d = manifests::load_builtin("toposortacle");
  const BucketChecker<Toposortacle> checker(d);
  const auto power = enumerate_power_set(d);
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto c = Toposortacle::generate({}, {}, rng, GenMode::nontrivial);
    const auto hits = std::count_if(power.begin(), power.end(), [&](const Bucket& b) {
      return bucket_satisfied_by(checker, b, c);
    });
    EXPECT_EQ(hits, 1);
  }
}

TEST(Decomposition, PowerSetSizesAndOrder) {
  EXPECT_EQ(enumerate_power_set(merged()).size(), 4u);
  EXPECT_EQ(enumerate_power_set(manifests::load_builtin("toposortacle")).size(), 64u);
  const auto one = enumerate_power_set(with_names(1));
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0].id(), "F");
  EXPECT_EQ(one[1].id(), "T");
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto all = enumerate_power_set(with_names(n));
    ASSERT_EQ(all.size(), std::size_t{1} << n);
    for (std::size_t i = 1; i < all.size(); ++i) {
      EXPECT_LT(all[i - 1].id(), all[i].id());
    }
  }
  EXPECT_THROW(enumerate_power_set(with_names(25)), InputError);
}

TEST(Decomposition, PruneRemovesContradictedBuckets) {
  const auto d = merged();
  const auto kept = prune_by_implications(d, enumerate_power_set(d));
  EXPECT_EQ(ids(kept), (std::set<std::string>{"FF", "FT", "TT"}));
  const auto free = with_names(3);
  EXPECT_EQ(prune_by_implications(free, enumerate_power_set(free)).size(), 8u);
}

TEST(Decomposition, PrunedBucketsAreEmptyWithinBounds) {
  // The buckets matching the clause pattern are exactly the ones the
  // enumeration proves empty among those with the three antecedents true.
  const auto d = five_property_topo();
  const BucketChecker<Toposortacle> checker(d);
  const auto certs = prove_all(checker, TopoBounds{4, 4, 5});
  const auto all = enumerate_power_set(d);
  const auto kept = ids(prune_by_implications(d, all));
  std::set<std::string> removed, empty_in_pattern;
  for (const auto& b : all) {
    if (!kept.count(b.id())) removed.insert(b.id());
  }
  for (const auto& c : certs) {
    const bool pattern = c.bucket[0] && c.bucket[1] && c.bucket[2];
    if (pattern && !c.bucket[4] && c.empty_within_bounds()) {
      empty_in_pattern.insert(c.bucket.id());
    }
    if (removed.count(c.bucket.id())) {
      EXPECT_TRUE(c.empty_within_bounds()) << c.bucket.id();
    }
  }
  EXPECT_EQ(removed, empty_in_pattern);
  EXPECT_EQ(removed.size(), 2u);
}

TEST(Decomposition, FocusedBucketsForLengthTarget) {
  const auto d = five_property_topo();
  const auto focused = focused_buckets(d, "SAME-NUM-VERTICES");
  EXPECT_EQ(ids(focused), (std::set<std::string>{"FTTTF", "TFTTF", "TTFTF"}));
  for (const auto& b : focused) EXPECT_TRUE(d.admits(b));
}

TEST(Decomposition, FocusedBucketWithoutIncomingImplication) {
  const auto d = five_property_topo();
  EXPECT_EQ(ids(focused_buckets(d, "SORTEDNESS")), (std::set<std::string>{"TTTFT"}));
  EXPECT_EQ(ids(focused_buckets(merged(), "SAME-NUM-VERTICES")),
            (std::set<std::string>{"FF"}));
  EXPECT_THROW(focused_buckets(d, "NOPE"), InputError);
}

// Independent statement of the fixpoint: a bucket is reachable when its
// false set can be grown from {target} by repeatedly adding one antecedent of
// an implication whose consequent is false and antecedents all true.
std::set<std::string> reference_focus(const Decomposition& d, std::size_t target) {
  std::set<std::string> seen;
  std::vector<std::string> work{Bucket::all_true(d.size()).with(target, false).id()};
  while (!work.empty()) {
    const std::string cur = work.back();
    work.pop_back();
    if (!seen.insert(cur).second) continue;
    for (const auto& imp : d.implications()) {
      if (cur[imp.consequent] != 'F') continue;
      bool all = true;
      for (auto a : imp.antecedents) all = all && cur[a] == 'T';
      if (!all) continue;
      for (auto a : imp.antecedents) {
        std::string next = cur;
        next[a] = 'F';
        work.push_back(next);
      }
    }
  }
  std::set<std::string> out;
  for (const auto& id : seen) {
    if (d.admits(Bucket::from_id(id))) out.insert(id);
  }
  return out;
}

TEST(DecompositionProperty, RandomHornSets) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen() % 6;
    std::vector<Implication> imps;
    const std::size_t count = gen() % 5;
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t consequent = gen() % n;
      std::set<std::size_t> ants;
      const std::size_t width = 1 + gen() % (n - 1);
      while (ants.size() < width) {
        const std::size_t a = gen() % n;
        if (a != consequent) ants.insert(a);
      }
      imps.push_back({{ants.begin(), ants.end()}, consequent});
    }
    const auto d = with_names(n, imps);
    const auto all = enumerate_power_set(d);
    const auto kept = prune_by_implications(d, all);
    // Prune keeps exactly the buckets no implication rules out.
    for (const auto& b : all) {
      const bool violates = std::any_of(imps.begin(), imps.end(), [&](const Implication& i) {
        return i.violated_by(b);
      });
      EXPECT_EQ(std::count(kept.begin(), kept.end(), b) == 1, !violates);
    }
    const auto kept_ids = ids(kept);
    for (std::size_t t = 0; t < n; ++t) {
      const auto focused = focused_buckets(d, t);
      EXPECT_EQ(ids(focused), reference_focus(d, t));
      for (const auto& b : focused) {
        EXPECT_FALSE(b[t]);
        EXPECT_TRUE(kept_ids.count(b.id())) << b.id();
      }
    }
  }
}

TEST(Decomposition, BucketJsonRoundTrip) {
  const auto d = manifests::load_builtin("toposortacle");
  const auto b = Bucket::from_id("TTFTFT");
  const auto j = d.bucket_json(b);
  EXPECT_EQ(j.begin().key(), "NO-NEW");
  EXPECT_EQ(j["UNIQUENESS"], false);
  EXPECT_EQ(d.bucket_from_json(j), b);
  EXPECT_THROW(d.bucket_from_json(Json::object()), InputError);
}

}  // namespace
}  // namespace bucketeer

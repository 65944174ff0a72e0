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

#include <map>

#include "test_support.hpp"

namespace bucketeer {
namespace {

using testing::five_property_topo;

SuiteResult result(const std::string& pred, const std::string& label, bool wrong) {
  SuiteResult r;
  r.predicate = pred;
  r.label = label;
  r.misclassified = wrong;
  return r;
}

TEST(Grouping, FivePropertyGroups) {
  const auto plan = group_buckets(five_property_topo());
  ASSERT_EQ(plan.groups.size(), 7u);
  EXPECT_EQ(plan.groups[3].label, "SORTEDNESS");
  EXPECT_EQ(plan.groups[3].buckets, std::set<std::string>{"TTTFT"});
  EXPECT_EQ(plan.groups[5].label, "UNFOCUSED");
  EXPECT_EQ(plan.groups[6].label, "POSITIVE");
  EXPECT_EQ(plan.groups[6].buckets,
            (std::set<std::string>{"FUNCTIONAL", "RELATIONAL", "TTTTT"}));
  EXPECT_EQ(plan.owner_of("FFFFF"), "UNFOCUSED");
  EXPECT_EQ(plan.owner_of("TTTFT"), "SORTEDNESS");
  EXPECT_FALSE(plan.owner_of("TTT"));
}

TEST(Grouping, TiesGoToTheFirstSubproperty) {
  const auto plan = group_buckets(manifests::load_builtin("toposortacle"));
  std::map<std::string, GroupTie> ties;
  for (const auto& t : plan.ties) ties[t.bucket] = t;
  ASSERT_TRUE(ties.count("TTFTFT"));
  EXPECT_EQ(ties["TTFTFT"].owner, "UNIQUENESS");
  EXPECT_EQ(ties["TTFTFT"].also_focused_for, std::vector<std::string>{"SAME-NUM-VERTICES"});
  EXPECT_EQ(plan.owner_of("TTFTFT"), "UNIQUENESS");
}

TEST(Grouping, OnlyEvaluatedSuitesAreGrouped) {
  const auto plan = group_buckets(five_property_topo(), std::set<std::string>{"TTTFT", "FFFFF"});
  std::size_t total = 0;
  for (const auto& g : plan.groups) total += g.buckets.size();
  EXPECT_EQ(total, 2u);
  EXPECT_TRUE(plan.groups[6].buckets.empty());
}

TEST(GroupingProperty, EverySuiteHasExactlyOneGroup) {
  for (const char* name : {"toposortacle", "toposortacle-merged", "sortacle", "matcher"}) {
    const auto d = manifests::load_builtin(name);
    const auto plan = group_buckets(d);
    std::map<std::string, int> seen;
    for (const auto& g : plan.groups) {
      for (const auto& b : g.buckets) ++seen[b];
    }
    EXPECT_EQ(seen.size(), (std::size_t{1} << d.size()) + 2) << name;
    for (const auto& [b, n] : seen) EXPECT_EQ(n, 1) << name << " " << b;
    for (const auto& t : plan.ties) {
      std::size_t focused_for = 0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        const auto f = focused_buckets(d, i);
        focused_for += std::count(f.begin(), f.end(), Bucket::from_id(t.bucket));
      }
      EXPECT_EQ(focused_for, 1 + t.also_focused_for.size());
    }
  }
}

TEST(ErrorsByGroup, CountsPredicatesPerGroup) {
  const auto plan = group_buckets(five_property_topo());
  const std::vector<SuiteResult> results{
      result("o1", "TTTFT", true),  result("o1", "FFFFF", true),
      result("o2", "TTTFT", false), result("o2", "FFFFF", true),
      result("o3", "FUNCTIONAL", true), result("o3", "TTTFT", true),
  };
  const auto errors = errors_by_group(results, plan);
  ASSERT_EQ(errors.size(), 8u);
  EXPECT_EQ(errors[3].second, (std::set<std::string>{"o1", "o3"}));
  EXPECT_EQ(errors[5].second, (std::set<std::string>{"o1", "o2"}));
  EXPECT_EQ(errors[6].second, std::set<std::string>{"o3"});
  EXPECT_EQ(errors[7].first, "TOTAL");
  EXPECT_EQ(errors[7].second, (std::set<std::string>{"o1", "o2", "o3"}));
}

TEST(ErrorsByGroup, AllFalseOnlyCountsAsUnfocused) {
  const auto plan = group_buckets(manifests::load_builtin("toposortacle"));
  const std::vector<SuiteResult> results{result("oracle", "FFFFFF", true)};
  for (const auto& [label, preds] : errors_by_group(results, plan)) {
    EXPECT_EQ(preds.size(), label == "UNFOCUSED" || label == "TOTAL" ? 1u : 0u) << label;
  }
}

TEST(Compare, DiffsBetweenSources) {
  const auto plan = group_buckets(five_property_topo());
  const std::vector<SuiteResult> a{result("o1", "TTTFT", true), result("o2", "TTTFT", true),
                                   result("o3", "TTTFT", false)};
  const std::vector<SuiteResult> b{result("o1", "TTTFT", false), result("o2", "TTTFT", true),
                                   result("o3", "TTTFT", true)};
  const auto rows = compare(a, b, plan);
  const auto& row = rows[3];
  EXPECT_EQ(row.group, "SORTEDNESS");
  EXPECT_EQ(row.count_a, 2u);
  EXPECT_EQ(row.count_b, 2u);
  EXPECT_EQ(row.a_minus_b, 1u);
  EXPECT_EQ(row.b_minus_a, 1u);
  EXPECT_EQ(rows.back().group, "TOTAL");

  const auto csv = comparison_csv(rows, "random", "exhaustive");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "group,source,count,diff_vs_exhaustive,diff_vs_random");
  EXPECT_NE(csv.find("SORTEDNESS,random,2,1,\nSORTEDNESS,exhaustive,2,,1\n"), std::string::npos);
  const auto j = comparison_json(rows, "random", "exhaustive", plan);
  EXPECT_EQ(j["rows"][3]["exhaustive"]["diff_vs_random"], 1);
  EXPECT_NE(comparison_table(rows, "random", "exhaustive", plan).find("+1/-1"),
            std::string::npos);
}

TEST(CompareProperty, SelfComparisonHasNoDiffs) {
  const auto d = manifests::load_builtin("toposortacle");
  const auto plan = group_buckets(d);
  Rng rng(11);
  const auto buckets = enumerate_power_set(d);
  for (int round = 0; round < 20; ++round) {
    std::vector<SuiteResult> results;
    for (int p = 0; p < 5; ++p) {
      for (const auto& b : buckets) {
        results.push_back(result("oracle" + std::to_string(p), b.id(), rng.chance(1, 8)));
      }
    }
    for (const auto& row : compare(results, results, plan)) {
      EXPECT_EQ(row.count_a, row.count_b);
      EXPECT_EQ(row.a_minus_b, 0u);
      EXPECT_EQ(row.b_minus_a, 0u);
    }
  }
}

TEST(Compare, PopulationsMustMatch) {
  const auto plan = group_buckets(five_property_topo());
  const std::vector<SuiteResult> a{result("o1", "TTTFT", true)};
  const std::vector<SuiteResult> b{result("o2", "TTTFT", true)};
  try {
    compare(a, b, plan);
    FAIL() << "expected a population mismatch";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("o1 o2"), std::string::npos);
  }
}

TEST(Clusters, GroupsEqualFingerprints) {
  const std::vector<Fingerprint> fps{
      {"a", {"X"}}, {"b", {}}, {"c", {"X"}}, {"d", {"X", "Y"}}, {"e", {}}, {"f", {"X"}}};
  const auto clusters = cluster_fingerprints(fps);
  ASSERT_EQ(clusters.size(), 3u);
  EXPECT_EQ(clusters[0].predicates, (std::vector<std::string>{"a", "c", "f"}));
  EXPECT_EQ(clusters[1].predicates, (std::vector<std::string>{"b", "e"}));
  EXPECT_TRUE(clusters[1].failed_buckets.empty());
  EXPECT_EQ(clusters[2].failed_buckets, (std::set<std::string>{"X", "Y"}));
  EXPECT_EQ(clusters_json(clusters)[2]["predicates"][0], "d");
}

// Compares neighbouring positions only, so it misses order violations between
// vertices that are further apart.
bool neighbour_sortedness(const TopoInput& in, const TopoOutput& out) {
  for (std::size_t i = 0; i + 1 < out.vertices.size(); ++i) {
    const Edge back{out.vertices[i + 1], out.vertices[i]};
    if (std::find(in.edges.begin(), in.edges.end(), back) != in.edges.end()) return false;
  }
  return true;
}

TEST(CrossValidation, ConsistentEnginesAreClean) {
  const BucketChecker<Toposortacle> checker(manifests::load_builtin("toposortacle"));
  GenConfig<Toposortacle> config;
  config.candidate_budget = 4000;
  const auto random = generate_all(checker, config, BucketSelection::parse("power"));
  const auto certs = prove_all(checker, TopoBounds{});
  std::vector<Suite<Toposortacle>> exhaustive;
  for (const auto& c : certs) {
    if (c.empty_within_bounds()) continue;
    exhaustive.push_back(std::get<Suite<Toposortacle>>(enumerate_bucket(checker, c.bucket, TopoBounds{}, 3)));
  }
  const auto cv = cross_validate<Toposortacle>(checker, random.suites, exhaustive, certs);
  EXPECT_TRUE(cv.clean());
  // A small budget leaves some nonempty buckets without a random suite.
  EXPECT_EQ(cv.warnings.size(), 37 - random.suites.size());
}

TEST(CrossValidation, MutatedCheckerIsCaught) {
  const auto d = manifests::load_builtin("toposortacle");
  const BucketChecker<Toposortacle> truth(d);
  const BucketChecker<Toposortacle> mutated(d, {{"SORTEDNESS", &neighbour_sortedness}});
  GenConfig<Toposortacle> config;
  config.candidate_budget = 4000;
  const auto random = generate_all(mutated, config, BucketSelection::parse("power"));
  const auto cv = cross_validate<Toposortacle>(truth, random.suites, {}, {});
  EXPECT_FALSE(cv.mislabeled.empty());
  EXPECT_FALSE(cv.clean());
  const auto& first = cv.mislabeled.front();
  EXPECT_NE(first.expected_bucket, first.observed_assignment);
  EXPECT_EQ(cross_validation_json(cv)["mislabeled"].size(), cv.mislabeled.size());
}

TEST(CrossValidation, EmptinessContradiction) {
  const BucketChecker<Toposortacle> checker(manifests::load_builtin("toposortacle-merged"));
  Suite<Toposortacle> suite;
  suite.bucket = Bucket::from_id("FT");
  suite.tests = {testing::topo_case({{0, 1}}, {0, 2})};
  ASSERT_EQ(checker.evaluate(suite.tests[0]), suite.bucket);
  // A forged certificate claiming FT is empty.
  const std::vector<Certificate<Toposortacle>> small{
      {Bucket::from_id("FT"), TopoBounds{3, 1, 2}, std::nullopt, 1}};
  const std::vector<Suite<Toposortacle>> random{suite};
  const auto cv = cross_validate<Toposortacle>(checker, random, {}, small);
  ASSERT_EQ(cv.contradicted.size(), 1u);
  EXPECT_EQ(cv.contradicted[0].bucket, "FT");

  // Outside the certificate's bounds it is only a warning.
  const std::vector<Certificate<Toposortacle>> tiny{
      {Bucket::from_id("FT"), TopoBounds{2, 1, 2}, std::nullopt, 1}};
  const auto warned = cross_validate<Toposortacle>(checker, random, {}, tiny);
  EXPECT_TRUE(warned.clean());
  EXPECT_EQ(warned.warnings.size(), 1u);
}

}  // namespace
}  // namespace bucketeer

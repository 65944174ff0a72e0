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

#include "test_support.hpp"

namespace bucketeer {
namespace {

using namespace std::chrono_literals;
using testing::fixture;
using testing::topo_case;

PredicateUnderTest predicate(const std::string& variant,
                             std::chrono::milliseconds timeout = 5000ms) {
  return {variant, fixture(variant), timeout};
}

EncodedSuite topo_suite(const std::string& id, std::vector<Case<Toposortacle>> tests) {
  Suite<Toposortacle> s;
  s.bucket = Bucket::from_id(id);
  s.tests = std::move(tests);
  return encode_suite(s);
}

const Case<Toposortacle> kValid = topo_case({{0, 1}, {1, 2}}, {0, 1, 2});
const Case<Toposortacle> kDuplicate = topo_case({{0, 1}, {1, 2}}, {0, 1, 1, 2});
const Case<Toposortacle> kEmptyOutput = topo_case({{0, 1}}, {});

TEST(Harness, ReferenceClassifiesCorrectly) {
  const auto neg = topo_suite("TTFTFT", {kDuplicate});
  const auto pos = topo_suite("TTTTTT", {kValid, topo_case({}, {})});
  const auto r = run_suite(predicate("topo-reference"), neg);
  EXPECT_EQ(r.verdicts, std::vector<Outcome>{Outcome::rejected});
  EXPECT_FALSE(r.misclassified);
  const auto p = run_suite(predicate("topo-reference"), pos);
  EXPECT_EQ(p.verdicts, (std::vector<Outcome>{Outcome::accepted, Outcome::accepted}));
  EXPECT_FALSE(p.misclassified);
  EXPECT_EQ(p.polarity, Polarity::positive);
}

TEST(Harness, AcceptingANegativeMisclassifies) {
  const auto r = run_suite(predicate("always-true"), topo_suite("TTFTFT", {kDuplicate}));
  EXPECT_TRUE(r.misclassified);
  const auto p = run_suite(predicate("always-false"), topo_suite("TTTTTT", {kValid}));
  EXPECT_TRUE(p.misclassified);
}

TEST(Harness, CrashIsAnError) {
  const auto r = run_suite(predicate("crash"), topo_suite("TTFTFT", {kDuplicate, kDuplicate}));
  EXPECT_EQ(r.verdicts, (std::vector<Outcome>{Outcome::crash, Outcome::crash}));
  EXPECT_TRUE(r.misclassified);
}

TEST(Harness, HangTimesOut) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_suite(predicate("hang", 200ms), topo_suite("TTFTFT", {kDuplicate}));
  EXPECT_EQ(r.verdicts, std::vector<Outcome>{Outcome::timeout});
  EXPECT_TRUE(r.misclassified);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 5s);
}

TEST(Harness, UnexpectedReplyIsGarbled) {
  const auto r = run_suite(predicate("garbled"), topo_suite("TTTTTT", {kValid}));
  EXPECT_EQ(r.verdicts, std::vector<Outcome>{Outcome::garbled});
  EXPECT_TRUE(r.misclassified);
}

TEST(Harness, RestartsAfterAnError) {
  const auto r = run_suite(predicate("crash-on-empty"),
                           topo_suite("FTFFFF", {kDuplicate, kEmptyOutput, kDuplicate}));
  EXPECT_EQ(r.verdicts,
            (std::vector<Outcome>{Outcome::rejected, Outcome::crash, Outcome::rejected}));
  EXPECT_TRUE(r.misclassified);
}

TEST(Harness, UnlaunchableCommand) {
  const PredicateUnderTest missing{"missing", "/nonexistent/bucketeer-predicate", 1000ms};
  EXPECT_THROW(run_suite(missing, topo_suite("TTTTTT", {kValid})), LaunchError);
  const PredicateUnderTest empty{"empty", "", 1000ms};
  EXPECT_THROW(run_suite(empty, topo_suite("TTTTTT", {kValid})), LaunchError);
  const std::vector<EncodedSuite> suites{topo_suite("TTTTTT", {kValid})};
  EXPECT_THROW(run_suites(missing, suites, 2), LaunchError);
}

TEST(Harness, OutcomeNames) {
  for (Outcome o : {Outcome::accepted, Outcome::rejected, Outcome::crash, Outcome::timeout,
                    Outcome::garbled}) {
    EXPECT_EQ(parse_outcome(to_string(o)), o);
  }
  EXPECT_EQ(to_string(Outcome::crash), "error:crash");
  EXPECT_THROW(parse_outcome("maybe"), InputError);
}

TEST(Harness, MisclassificationRule) {
  const std::vector<Outcome> rejected{Outcome::rejected, Outcome::rejected};
  const std::vector<Outcome> one_accept{Outcome::rejected, Outcome::accepted};
  EXPECT_FALSE(misclassifies(Polarity::negative, rejected));
  EXPECT_TRUE(misclassifies(Polarity::negative, one_accept));
  EXPECT_TRUE(misclassifies(Polarity::positive, one_accept));
  EXPECT_TRUE(misclassifies(Polarity::negative, std::vector<Outcome>{Outcome::timeout}));
}

struct TopoSuites {
  std::vector<EncodedSuite> power;
  EncodedSuite functional;
  EncodedSuite all_false;
};

const TopoSuites& topo_suites() {
  static const TopoSuites suites = [] {
    const BucketChecker<Toposortacle> checker(manifests::load_builtin("toposortacle"));
    const auto buckets = enumerate_power_set(checker.decomposition());
    TopoSuites s;
    for (auto& [bucket, tests] : enumerate_all(checker, buckets, TopoBounds{}, 10)) {
      if (tests.empty()) continue;
      Suite<Toposortacle> suite;
      suite.bucket = bucket;
      suite.tests = std::move(tests);
      s.power.push_back(encode_suite(suite));
      if (bucket == Bucket::all_false(6)) s.all_false = s.power.back();
    }
    Suite<Toposortacle> functional;
    functional.bucket = Bucket::all_true(6);
    functional.tests = functional_inputs(checker, TopoBounds{3, 2, 3}, Arity::exactly_one);
    s.functional = encode_suite(functional, std::string("FUNCTIONAL"));
    return s;
  }();
  return suites;
}

TEST(Harness, FilterGates) {
  const std::vector<PredicateUnderTest> preds{
      predicate("topo-reference"), predicate("always-true"), predicate("always-false"),
      predicate("topo-length-only")};
  const auto report =
      filter_predicates(preds, topo_suites().functional, topo_suites().all_false);
  EXPECT_EQ(report.kept, (std::vector<std::string>{"topo-reference", "topo-length-only"}));
  EXPECT_EQ(report.excluded.at("always-true"), std::vector<std::string>{"ALL"});
  EXPECT_EQ(report.excluded.at("always-false"), std::vector<std::string>{"FUNCTIONAL"});
}

TEST(Harness, FingerprintsOfKnownBugs) {
  const auto& suites = topo_suites().power;
  ASSERT_EQ(suites.size(), 37u);
  const auto reference = run_suites(predicate("topo-reference"), suites, 2);
  EXPECT_TRUE(fingerprint("topo-reference", reference).failed_buckets.empty());
  const auto missing = run_suites(predicate("topo-missing-uniqueness"), suites, 2);
  EXPECT_EQ(fingerprint("topo-missing-uniqueness", missing).failed_buckets,
            (std::set<std::string>{"TTFTFF", "TTFTFT"}));
  for (std::size_t i = 0; i < suites.size(); ++i) EXPECT_EQ(missing[i].label, suites[i].label);
}

TEST(HarnessProperty, FingerprintIgnoresSuiteOrder) {
  auto suites = topo_suites().power;
  const auto pred = predicate("topo-incoming-edge-count");
  const auto baseline = fingerprint(pred.id, run_suites(pred, suites, 1));
  EXPECT_EQ(baseline.failed_buckets, (std::set<std::string>{"TTFFFT", "TTFTFT"}));
  std::mt19937 gen(5);
  for (int round = 0; round < 3; ++round) {
    std::shuffle(suites.begin(), suites.end(), gen);
    EXPECT_EQ(fingerprint(pred.id, run_suites(pred, suites, 3)), baseline);
  }
}

TEST(Harness, ResultsRoundTrip) {
  const auto results =
      run_suites(predicate("crash-on-empty"),
                 std::vector<EncodedSuite>{topo_suite("FTFFFF", {kDuplicate, kEmptyOutput})});
  const Json j = results_to_json("x", "cmd", results);
  const auto back = results_from_json(j);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].verdicts, results[0].verdicts);
  EXPECT_EQ(back[0].misclassified, results[0].misclassified);
  EXPECT_EQ(back[0].predicate, "x");
  const Fingerprint fp{"x", {"FTFFFF"}};
  EXPECT_EQ(fingerprint_from_json(fingerprint_to_json(fp)), fp);
}

TEST(Harness, SuiteFilesEncodeWithoutTheProblem) {
  const BucketChecker<Toposortacle> checker(manifests::load_builtin("toposortacle"));
  Suite<Toposortacle> s;
  s.bucket = Bucket::from_id("TTFTFT");
  s.tests = {kDuplicate};
  const auto wire = encode_suite_json(suite_to_json(s, checker.decomposition()));
  EXPECT_EQ(wire.label, "TTFTFT");
  EXPECT_EQ(wire.polarity, Polarity::negative);
  EXPECT_EQ(wire.lines, encode_suite(s).lines);
}

}  // namespace
}  // namespace bucketeer

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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bucketeer/bucket.hpp"
#include "bucketeer/decomposition.hpp"
#include "bucketeer/error.hpp"
#include "bucketeer/harness.hpp"
#include "bucketeer/problem.hpp"
#include "bucketeer/suite.hpp"

namespace bucketeer {

inline constexpr std::string_view kUnfocused = "UNFOCUSED";
inline constexpr std::string_view kPositive = "POSITIVE";
inline constexpr std::string_view kTotal = "TOTAL";
inline constexpr std::string_view kFunctional = "FUNCTIONAL";
inline constexpr std::string_view kRelational = "RELATIONAL";

struct SuiteGroup {
  std::string label;
  std::set<std::string> buckets;  // bucket ids, or FUNCTIONAL / RELATIONAL
};

// A bucket focused for more than one subproperty; it is owned by the first.
struct GroupTie {
  std::string bucket;
  std::string owner;
  std::vector<std::string> also_focused_for;
};

struct GroupPlan {
  std::vector<SuiteGroup> groups;  // subproperties in order, UNFOCUSED, POSITIVE
  std::vector<GroupTie> ties;

  // Label of the group holding a suite, if any.
  std::optional<std::string> owner_of(std::string_view suite) const {
    for (const auto& g : groups) {
      if (g.buckets.count(std::string(suite))) return g.label;
    }
    return std::nullopt;
  }
};

// Partitions the evaluated suites. By default every power-set bucket plus the
// FUNCTIONAL and RELATIONAL suites is considered evaluated.
inline GroupPlan group_buckets(const Decomposition& decomp,
                               std::optional<std::set<std::string>> evaluated = {}) {
  if (!evaluated) {
    evaluated.emplace();
    for (const auto& b : enumerate_power_set(decomp)) evaluated->insert(b.id());
    evaluated->insert(std::string(kFunctional));
    evaluated->insert(std::string(kRelational));
  }
  GroupPlan plan;
  std::map<std::string, std::size_t> tie_index;
  std::set<std::string> owned;
  for (std::size_t i = 0; i < decomp.size(); ++i) {
    SuiteGroup group{decomp[i].name, {}};
    for (const auto& b : focused_buckets(decomp, i)) {
      const std::string id = b.id();
      if (!evaluated->count(id)) continue;
      if (owned.insert(id).second) {
        group.buckets.insert(id);
        continue;
      }
      auto it = tie_index.find(id);
      if (it == tie_index.end()) {
        tie_index[id] = plan.ties.size();
        plan.ties.push_back({id, *plan.owner_of(id), {decomp[i].name}});
      } else {
        plan.ties[it->second].also_focused_for.push_back(decomp[i].name);
      }
    }
    plan.groups.push_back(std::move(group));
  }
  SuiteGroup unfocused{std::string(kUnfocused), {}};
  SuiteGroup positive{std::string(kPositive), {}};
  const std::string all_true = Bucket::all_true(decomp.size()).id();
  for (const auto& id : *evaluated) {
    if (owned.count(id)) continue;
    if (id == all_true || id == kFunctional || id == kRelational) {
      positive.buckets.insert(id);
    } else {
      unfocused.buckets.insert(id);
    }
  }
  plan.groups.push_back(std::move(unfocused));
  plan.groups.push_back(std::move(positive));
  return plan;
}

// label -> predicates misclassifying at least one suite of the group, in
// group order, with a final TOTAL entry.
using GroupErrors = std::vector<std::pair<std::string, std::set<std::string>>>;

inline GroupErrors errors_by_group(std::span<const SuiteResult> results,
                                   const GroupPlan& plan) {
  GroupErrors out;
  std::set<std::string> total;
  for (const auto& g : plan.groups) {
    std::set<std::string> found;
    for (const auto& r : results) {
      if (r.misclassified && g.buckets.count(r.label)) found.insert(r.predicate);
    }
    total.insert(found.begin(), found.end());
    out.emplace_back(g.label, std::move(found));
  }
  out.emplace_back(std::string(kTotal), std::move(total));
  return out;
}

inline std::set<std::string> population(std::span<const SuiteResult> results) {
  std::set<std::string> ids;
  for (const auto& r : results) ids.insert(r.predicate);
  return ids;
}

struct ComparisonRow {
  std::string group;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  std::size_t a_minus_b = 0;
  std::size_t b_minus_a = 0;
};

inline std::vector<ComparisonRow> compare(std::span<const SuiteResult> a,
                                          std::span<const SuiteResult> b,
                                          const GroupPlan& plan) {
  const auto pop_a = population(a);
  const auto pop_b = population(b);
  if (pop_a != pop_b) {
    std::vector<std::string> diff;
    std::set_symmetric_difference(pop_a.begin(), pop_a.end(), pop_b.begin(),
                                  pop_b.end(), std::back_inserter(diff));
    std::string msg = "predicate populations differ:";
    for (const auto& id : diff) msg += " " + id;
    throw InputError(msg);
  }
  const auto errors_a = errors_by_group(a, plan);
  const auto errors_b = errors_by_group(b, plan);
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < errors_a.size(); ++i) {
    const auto& sa = errors_a[i].second;
    const auto& sb = errors_b[i].second;
    ComparisonRow row{errors_a[i].first, sa.size(), sb.size(), 0, 0};
    for (const auto& id : sa) row.a_minus_b += sb.count(id) ? 0 : 1;
    for (const auto& id : sb) row.b_minus_a += sa.count(id) ? 0 : 1;
    rows.push_back(row);
  }
  return rows;
}

struct FingerprintCluster {
  std::set<std::string> failed_buckets;
  std::vector<std::string> predicates;
};

// Exact-set clustering, largest cluster first; equal sizes fall back to the
// bucket sets so the order is stable.
inline std::vector<FingerprintCluster> cluster_fingerprints(
    std::span<const Fingerprint> fingerprints) {
  std::map<std::set<std::string>, std::vector<std::string>> by_set;
  for (const auto& fp : fingerprints) by_set[fp.failed_buckets].push_back(fp.predicate);
  std::vector<FingerprintCluster> out;
  for (auto& [set, preds] : by_set) {
    std::sort(preds.begin(), preds.end());
    out.push_back({set, std::move(preds)});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.predicates.size() > y.predicates.size();
  });
  return out;
}

// ---- rendering ----

inline std::string comparison_csv(std::span<const ComparisonRow> rows,
                                  std::string_view name_a,
                                  std::string_view name_b) {
  std::ostringstream os;
  os << "group,source,count,diff_vs_" << name_b << ",diff_vs_" << name_a << "\n";
  for (const auto& r : rows) {
    os << r.group << "," << name_a << "," << r.count_a << "," << r.a_minus_b
       << ",\n";
    os << r.group << "," << name_b << "," << r.count_b << ",," << r.b_minus_a
       << "\n";
  }
  return os.str();
}

inline Json comparison_json(std::span<const ComparisonRow> rows,
                            std::string_view name_a, std::string_view name_b,
                            const GroupPlan& plan) {
  Json j;
  j["sources"] = Json::array({name_a, name_b});
  Json list = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["group"] = r.group;
    row[std::string(name_a)] = {{"count", r.count_a},
                                {"diff_vs_" + std::string(name_b), r.a_minus_b}};
    row[std::string(name_b)] = {{"count", r.count_b},
                                {"diff_vs_" + std::string(name_a), r.b_minus_a}};
    list.push_back(std::move(row));
  }
  j["rows"] = std::move(list);
  j["groups"] = Json::object();
  for (const auto& g : plan.groups) {
    j["groups"][g.label] = Json(std::vector<std::string>(g.buckets.begin(),
                                                         g.buckets.end()));
  }
  Json ties = Json::array();
  for (const auto& t : plan.ties) {
    ties.push_back({{"bucket", t.bucket},
                    {"owner", t.owner},
                    {"also_focused_for", t.also_focused_for}});
  }
  j["ties"] = std::move(ties);
  return j;
}

inline std::string comparison_table(std::span<const ComparisonRow> rows,
                                    std::string_view name_a,
                                    std::string_view name_b,
                                    const GroupPlan& plan) {
  std::size_t w = std::max<std::size_t>(5, kTotal.size());
  for (const auto& r : rows) w = std::max(w, r.group.size());
  const std::size_t ca = std::max<std::size_t>(name_a.size(), 5);
  const std::size_t cb = std::max<std::size_t>(name_b.size(), 5);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "group" << "  "
     << std::right << std::setw(static_cast<int>(ca)) << name_a << "  "
     << std::setw(static_cast<int>(cb)) << name_b << "  +/-\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(w)) << r.group << "  "
       << std::right << std::setw(static_cast<int>(ca)) << r.count_a << "  "
       << std::setw(static_cast<int>(cb)) << r.count_b << "  +" << r.a_minus_b
       << "/-" << r.b_minus_a << "\n";
  }
  for (const auto& t : plan.ties) {
    os << "note: " << t.bucket << " is focused for " << t.owner;
    for (const auto& o : t.also_focused_for) os << ", " << o;
    os << "; counted under " << t.owner << "\n";
  }
  return os.str();
}

inline Json clusters_json(std::span<const FingerprintCluster> clusters) {
  Json list = Json::array();
  for (const auto& c : clusters) {
    list.push_back({{"failed_buckets", std::vector<std::string>(
                                           c.failed_buckets.begin(),
                                           c.failed_buckets.end())},
                    {"predicates", c.predicates}});
  }
  return list;
}

// ---- cross-validation ----

struct Discrepancy {
  std::string suite;  // engine/bucket id
  std::size_t test_index = 0;
  std::string expected_bucket;
  std::string observed_assignment;
};

// A bucket concretized by one engine but certified empty by the other while
// the concretizing test fits inside the certificate's bounds.
struct EmptinessConflict {
  std::string bucket;
  std::size_t test_index = 0;
};

struct CrossValidation {
  std::vector<Discrepancy> mislabeled;          // type (a)
  std::vector<EmptinessConflict> contradicted;  // type (b)
  std::vector<std::string> warnings;

  bool clean() const noexcept { return mislabeled.empty() && contradicted.empty(); }
};

// Re-evaluates every test of both engines' suites and checks random suites
// against the exhaustive engine's certificates.
template <class P>
CrossValidation cross_validate(const BucketChecker<P>& checker,
                               std::span<const Suite<P>> random_suites,
                               std::span<const Suite<P>> exhaustive_suites,
                               std::span<const Certificate<P>> certificates) {
  CrossValidation report;
  auto audit = [&](const Suite<P>& s) {
    for (std::size_t i = 0; i < s.tests.size(); ++i) {
      Bucket observed;
      try {
        observed = checker.evaluate(s.tests[i]);
      } catch (const InputError& e) {
        report.mislabeled.push_back({std::string(to_string(s.engine)) + "/" +
                                         s.bucket.id(),
                                     i, s.bucket.id(), std::string("invalid: ") + e.what()});
        continue;
      }
      if (observed != s.bucket) {
        report.mislabeled.push_back({std::string(to_string(s.engine)) + "/" +
                                         s.bucket.id(),
                                     i, s.bucket.id(), observed.id()});
      }
    }
  };
  for (const auto& s : random_suites) audit(s);
  for (const auto& s : exhaustive_suites) audit(s);

  std::map<std::string, const Certificate<P>*> by_bucket;
  for (const auto& c : certificates) by_bucket[c.bucket.id()] = &c;
  std::set<std::string> concretized;
  for (const auto& s : random_suites) {
    const std::string id = s.bucket.id();
    concretized.insert(id);
    auto it = by_bucket.find(id);
    if (it == by_bucket.end() || !it->second->empty_within_bounds()) continue;
    bool conflict = false;
    for (std::size_t i = 0; i < s.tests.size(); ++i) {
      if (P::covered_by(s.tests[i], it->second->bounds)) {
        report.contradicted.push_back({id, i});
        conflict = true;
        break;
      }
    }
    if (!conflict) {
      report.warnings.push_back("bucket " + id +
                                " is certified empty only within bounds; the "
                                "random suite lies outside them");
    }
  }
  for (const auto& c : certificates) {
    if (!c.empty_within_bounds() && !concretized.count(c.bucket.id())) {
      report.warnings.push_back("bucket " + c.bucket.id() +
                                " is nonempty but has no random suite");
    }
  }
  return report;
}

inline Json cross_validation_json(const CrossValidation& cv) {
  Json j;
  Json a = Json::array();
  for (const auto& d : cv.mislabeled) {
    a.push_back({{"suite", d.suite},
                 {"test_index", d.test_index},
                 {"expected_bucket", d.expected_bucket},
                 {"observed_assignment", d.observed_assignment}});
  }
  Json b = Json::array();
  for (const auto& c : cv.contradicted) {
    b.push_back({{"bucket", c.bucket}, {"test_index", c.test_index}});
  }
  j["mislabeled"] = std::move(a);
  j["contradicted"] = std::move(b);
  j["warnings"] = cv.warnings;
  return j;
}

}  // namespace bucketeer

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
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "bucketeer/bucket.hpp"
#include "bucketeer/decomposition.hpp"
#include "bucketeer/error.hpp"
#include "bucketeer/problem.hpp"
#include "bucketeer/rng.hpp"
#include "bucketeer/suite.hpp"

namespace bucketeer {

template <class P>
struct GenConfig {
  std::uint64_t global_seed = 0;
  std::size_t suite_size = 10;
  std::size_t candidate_budget = 20000;
  ListLimits limits;
  std::size_t trivial_attempts = 1;
  typename P::Knobs knobs;

  void validate() const {
    if (suite_size < 1) throw InputError("suite size must be at least 1");
    if (candidate_budget < suite_size) {
      throw InputError("candidate budget must be at least the suite size");
    }
    if (limits.min_out_len > limits.max_out_len) {
      throw InputError("min output length exceeds max output length");
    }
  }

  // Everything that influences which candidates are drawn or accepted.
  std::string digest(const Decomposition& decomp) const {
    std::string s = std::string(P::name) + ";seed=" +
                    std::to_string(global_seed) +
                    ";size=" + std::to_string(suite_size) +
                    ";budget=" + std::to_string(candidate_budget) +
                    ";out=" + std::to_string(limits.min_out_len) + ".." +
                    std::to_string(limits.max_out_len) +
                    ";edges=" + std::to_string(limits.min_edges) +
                    ";trivial=" + std::to_string(trivial_attempts) +
                    ";knobs=" + P::knobs_digest(knobs) + ";subs=";
    for (const auto& sub : decomp.subproperties()) s += sub.name + ",";
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a(s)));
    return hex;
  }
};

enum class CacheStatus { exhausted_budget, proved_empty };

// Remembers buckets that could not be concretized, keyed by problem, bucket
// and configuration digest. Shared between threads; with a backing file,
// every record is persisted with an atomic rename.
class InfeasibilityCache {
 public:
  InfeasibilityCache() = default;
  explicit InfeasibilityCache(std::filesystem::path path)
      : path_(std::move(path)) {
    if (std::filesystem::exists(path_)) {
      const Json j = read_json(path_);
      for (auto it = j.begin(); it != j.end(); ++it) {
        const auto status = it.value().get<std::string>();
        entries_[it.key()] = status == "proved_empty"
                                 ? CacheStatus::proved_empty
                                 : CacheStatus::exhausted_budget;
      }
    }
  }

  static std::string key(std::string_view problem, const Bucket& bucket,
                         std::string_view digest) {
    return std::string(problem) + "/" + bucket.id() + "/" + std::string(digest);
  }

  std::optional<CacheStatus> lookup(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  // A failed write is reported on stderr; the in-memory entry stays.
  void record(const std::string& key, CacheStatus status) {
    std::lock_guard lock(mu_);
    entries_[key] = status;
    if (path_.empty()) return;
    Json j = Json::object();
    for (const auto& [k, v] : entries_) {
      j[k] = v == CacheStatus::proved_empty ? "proved_empty" : "exhausted_budget";
    }
    try {
      write_json(path_, j);
    } catch (const std::exception& e) {
      std::cerr << "warning: could not write cache " << path_ << ": "
                << e.what() << "\n";
    }
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, CacheStatus> entries_;
};

struct Exhausted {
  std::size_t candidates_drawn = 0;
  bool cached = false;
};

template <class P>
struct Concretized {
  Suite<P> suite;
  std::size_t candidates_drawn = 0;
};

template <class P>
using Concretization = std::variant<Concretized<P>, Exhausted>;

// Rejection sampling for one bucket. The first `trivial_attempts` draws use
// the trivial generator; all draws count against the budget. Duplicates are
// judged on the JSON encoding.
template <class P>
Concretization<P> concretize_bucket(const BucketChecker<P>& checker,
                                    const Bucket& bucket,
                                    const GenConfig<P>& config,
                                    InfeasibilityCache* cache = nullptr) {
  config.validate();
  const auto& decomp = checker.decomposition();
  const std::string key =
      InfeasibilityCache::key(P::name, bucket, config.digest(decomp));
  if (cache != nullptr && cache->lookup(key)) return Exhausted{0, true};

  Rng rng(derive_seed(config.global_seed, P::name, bucket.id()));
  Suite<P> suite;
  suite.bucket = bucket;
  suite.engine = Engine::random;
  suite.seed = config.global_seed;
  std::set<std::string> seen;
  std::size_t drawn = 0;
  while (suite.tests.size() < config.suite_size &&
         drawn < config.candidate_budget) {
    const GenMode mode = drawn < config.trivial_attempts ? GenMode::trivial
                                                         : GenMode::nontrivial;
    ++drawn;
    Case<P> c = P::generate(config.limits, config.knobs, rng, mode);
    if (checker.evaluate(c) != bucket) continue;
    if (!seen.insert(encode_case<P>(c).dump()).second) continue;
    suite.tests.push_back(std::move(c));
  }
  if (suite.tests.size() < config.suite_size) {
    if (cache != nullptr) cache->record(key, CacheStatus::exhausted_budget);
    return Exhausted{drawn, false};
  }
  return Concretized<P>{std::move(suite), drawn};
}

struct BucketSelection {
  enum class Kind { power_set, pruned_power_set, focused };
  Kind kind = Kind::power_set;
  std::string target;

  // "power", "pruned" or "focused:<subproperty>".
  static BucketSelection parse(std::string_view s) {
    if (s == "power") return {Kind::power_set, {}};
    if (s == "pruned") return {Kind::pruned_power_set, {}};
    constexpr std::string_view prefix = "focused:";
    if (s.substr(0, prefix.size()) == prefix && s.size() > prefix.size()) {
      return {Kind::focused, std::string(s.substr(prefix.size()))};
    }
    throw InputError("bucket selection must be power, pruned or focused:<name>");
  }
};

inline std::vector<Bucket> select_buckets(const Decomposition& decomp,
                                          const BucketSelection& sel) {
  switch (sel.kind) {
    case BucketSelection::Kind::power_set:
      return enumerate_power_set(decomp);
    case BucketSelection::Kind::pruned_power_set: {
      const auto all = enumerate_power_set(decomp);
      return prune_by_implications(decomp, all);
    }
    case BucketSelection::Kind::focused:
      return focused_buckets(decomp, sel.target);
  }
  return {};
}

template <class P>
struct GenerationReport {
  std::vector<Suite<P>> suites;  // canonical bucket order
  std::vector<Bucket> concretized;
  std::vector<Bucket> exhausted;
  std::vector<Bucket> skipped_by_cache;
  std::size_t candidates_drawn = 0;
};

// Concretizes every selected bucket. Buckets are independent streams, so
// `jobs` workers produce the same result as one.
template <class P>
GenerationReport<P> generate_all(const BucketChecker<P>& checker,
                                 const GenConfig<P>& config,
                                 const BucketSelection& selection,
                                 InfeasibilityCache* cache = nullptr,
                                 std::size_t jobs = 1) {
  config.validate();
  const auto buckets = select_buckets(checker.decomposition(), selection);
  std::vector<std::optional<Concretization<P>>> results(buckets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < buckets.size(); i = next++) {
      results[i] = concretize_bucket(checker, buckets[i], config, cache);
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, buckets.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  GenerationReport<P> report;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    auto& r = *results[i];
    if (auto* ok = std::get_if<Concretized<P>>(&r)) {
      report.candidates_drawn += ok->candidates_drawn;
      report.concretized.push_back(buckets[i]);
      report.suites.push_back(std::move(ok->suite));
    } else {
      const auto& ex = std::get<Exhausted>(r);
      report.candidates_drawn += ex.candidates_drawn;
      (ex.cached ? report.skipped_by_cache : report.exhausted)
          .push_back(buckets[i]);
    }
  }
  return report;
}

}  // namespace bucketeer

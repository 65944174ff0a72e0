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
#include <deque>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bucketeer/bucket.hpp"
#include "bucketeer/error.hpp"

namespace bucketeer {

enum class SubpropertyKind { core, error };

struct Subproperty {
  std::string name;
  SubpropertyKind kind = SubpropertyKind::core;
  std::string description;
};

// Horn clause over subproperty indices: all antecedents => consequent.
struct Implication {
  std::vector<std::size_t> antecedents;
  std::size_t consequent = 0;

  bool violated_by(const Bucket& bucket) const noexcept {
    if (bucket[consequent]) return false;
    return std::all_of(antecedents.begin(), antecedents.end(),
                       [&](std::size_t a) { return bucket[a]; });
  }

  friend bool operator==(const Implication&, const Implication&) = default;
};

class Decomposition {
 public:
  Decomposition(std::string problem, std::vector<Subproperty> subproperties,
                std::vector<Implication> implications = {})
      : problem_(std::move(problem)),
        subproperties_(std::move(subproperties)),
        implications_(std::move(implications)) {
    if (subproperties_.empty()) {
      throw InputError("decomposition '" + problem_ +
                       "' declares no subproperties");
    }
    if (subproperties_.size() > Bucket::kMaxWidth) {
      throw InputError("too many subproperties");
    }
    for (std::size_t i = 0; i < subproperties_.size(); ++i) {
      if (subproperties_[i].name.empty()) {
        throw InputError("subproperty name must be non-empty");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (subproperties_[j].name == subproperties_[i].name) {
          throw InputError("duplicate subproperty '" +
                           subproperties_[i].name + "'");
        }
      }
    }
    for (auto& imp : implications_) {
      if (imp.antecedents.empty()) {
        throw InputError("implication has no antecedents");
      }
      if (imp.consequent >= size()) {
        throw InputError("implication consequent out of range");
      }
      std::sort(imp.antecedents.begin(), imp.antecedents.end());
      imp.antecedents.erase(
          std::unique(imp.antecedents.begin(), imp.antecedents.end()),
          imp.antecedents.end());
      for (std::size_t a : imp.antecedents) {
        if (a >= size()) {
          throw InputError("implication antecedent out of range");
        }
        if (a == imp.consequent) {
          throw InputError("implication consequent '" +
                           subproperties_[a].name +
                           "' also appears as an antecedent");
        }
      }
    }
  }

  // {"problem": str, "subproperties": [{"name", "kind"}],
  //  "implications": [{"if": [str], "then": str}]}
  static Decomposition from_json(const nlohmann::ordered_json& j) {
    try {
      std::vector<Subproperty> subs;
      for (const auto& s : j.at("subproperties")) {
        Subproperty sub;
        sub.name = s.at("name").get<std::string>();
        const std::string kind = s.value("kind", std::string("core"));
        if (kind == "core") {
          sub.kind = SubpropertyKind::core;
        } else if (kind == "error") {
          sub.kind = SubpropertyKind::error;
        } else {
          throw InputError("unknown subproperty kind '" + kind + "'");
        }
        sub.description = s.value("description", std::string());
        subs.push_back(std::move(sub));
      }
      auto lookup = [&](const std::string& name) {
        for (std::size_t i = 0; i < subs.size(); ++i) {
          if (subs[i].name == name) return i;
        }
        throw InputError("implication references undeclared subproperty '" +
                         name + "'");
      };
      std::vector<Implication> imps;
      if (j.contains("implications")) {
        for (const auto& imp : j.at("implications")) {
          Implication out;
          for (const auto& a : imp.at("if")) {
            out.antecedents.push_back(lookup(a.get<std::string>()));
          }
          out.consequent = lookup(imp.at("then").get<std::string>());
          imps.push_back(std::move(out));
        }
      }
      return Decomposition(j.at("problem").get<std::string>(),
                           std::move(subs), std::move(imps));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed manifest: ") + e.what());
    }
  }

  static Decomposition parse(std::string_view text) {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("manifest is not valid JSON: ") + e.what());
    }
    return from_json(j);
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["problem"] = problem_;
    auto subs = nlohmann::ordered_json::array();
    for (const auto& s : subproperties_) {
      nlohmann::ordered_json o;
      o["name"] = s.name;
      o["kind"] = s.kind == SubpropertyKind::core ? "core" : "error";
      if (!s.description.empty()) o["description"] = s.description;
      subs.push_back(std::move(o));
    }
    j["subproperties"] = std::move(subs);
    auto imps = nlohmann::ordered_json::array();
    for (const auto& imp : implications_) imps.push_back(implication_json(imp));
    j["implications"] = std::move(imps);
    return j;
  }

  const std::string& problem() const noexcept { return problem_; }
  std::size_t size() const noexcept { return subproperties_.size(); }
  const std::vector<Subproperty>& subproperties() const noexcept {
    return subproperties_;
  }
  const Subproperty& operator[](std::size_t i) const {
    return subproperties_.at(i);
  }
  const std::vector<Implication>& implications() const noexcept {
    return implications_;
  }

  std::optional<std::size_t> find(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < subproperties_.size(); ++i) {
      if (subproperties_[i].name == name) return i;
    }
    return std::nullopt;
  }

  std::size_t index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw InputError("subproperty '" + std::string(name) +
                     "' is not declared for " + problem_);
  }

  Implication implication(std::span<const std::string> antecedents,
                          std::string_view consequent) const {
    Implication imp;
    for (const auto& a : antecedents) imp.antecedents.push_back(index_of(a));
    imp.consequent = index_of(consequent);
    if (imp.antecedents.empty()) {
      throw InputError("implication has no antecedents");
    }
    if (std::find(imp.antecedents.begin(), imp.antecedents.end(),
                  imp.consequent) != imp.antecedents.end()) {
      throw InputError("implication consequent appears as an antecedent");
    }
    std::sort(imp.antecedents.begin(), imp.antecedents.end());
    return imp;
  }

  nlohmann::ordered_json implication_json(const Implication& imp) const {
    nlohmann::ordered_json j;
    auto ifs = nlohmann::ordered_json::array();
    for (std::size_t a : imp.antecedents) ifs.push_back(subproperties_.at(a).name);
    j["if"] = std::move(ifs);
    j["then"] = subproperties_.at(imp.consequent).name;
    return j;
  }

  // {name: bool, ...} in declaration order.
  nlohmann::ordered_json bucket_json(const Bucket& bucket) const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < size(); ++i) {
      j[subproperties_[i].name] = bucket[i];
    }
    return j;
  }

  Bucket bucket_from_json(const nlohmann::ordered_json& j) const {
    if (!j.is_object() || j.size() != size()) {
      throw InputError("bucket must assign every subproperty exactly once");
    }
    std::uint64_t truth = 0;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it.value().is_boolean()) {
        throw InputError("bucket value for '" + it.key() + "' is not a boolean");
      }
      if (it.value().get<bool>()) truth |= 1ULL << index_of(it.key());
    }
    return {truth, size()};
  }

  bool admits(const Bucket& bucket) const noexcept {
    return std::none_of(
        implications_.begin(), implications_.end(),
        [&](const Implication& imp) { return imp.violated_by(bucket); });
  }

 private:
  std::string problem_;
  std::vector<Subproperty> subproperties_;
  std::vector<Implication> implications_;
};

// All 2^|S| buckets in canonical-id order (FF..F first, TT..T last).
inline std::vector<Bucket> enumerate_power_set(const Decomposition& decomp) {
  const std::size_t n = decomp.size();
  if (n > 24) {
    throw InputError("refusing to enumerate a power set over " +
                     std::to_string(n) + " subproperties");
  }
  std::vector<Bucket> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t code = 0; code < (1ULL << n); ++code) {
    std::uint64_t truth = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((code >> (n - 1 - i)) & 1U) truth |= 1ULL << i;
    }
    out.emplace_back(truth, n);
  }
  return out;
}

// Drops buckets in which some declared implication has every antecedent true
// and its consequent false. Order of the survivors is preserved.
inline std::vector<Bucket> prune_by_implications(const Decomposition& decomp,
                                                 std::span<const Bucket> buckets) {
  std::vector<Bucket> out;
  for (const auto& b : buckets) {
    if (decomp.admits(b)) out.push_back(b);
  }
  return out;
}

// Least fixpoint starting from the bucket where only `target` is false. Each
// implication whose consequent is false while all of its antecedents are true
// spawns one bucket per antecedent, with that antecedent also falsified.
// Buckets still contradicting a declared implication are dropped at the end.
inline std::vector<Bucket> focused_buckets(const Decomposition& decomp,
                                           std::size_t target) {
  if (target >= decomp.size()) {
    throw InputError("focus target out of range");
  }
  const Bucket start = Bucket::all_true(decomp.size()).with(target, false);
  std::set<Bucket> seen{start};
  std::deque<Bucket> work{start};
  while (!work.empty()) {
    const Bucket b = work.front();
    work.pop_front();
    for (const auto& imp : decomp.implications()) {
      if (!imp.violated_by(b)) continue;
      for (std::size_t a : imp.antecedents) {
        const Bucket next = b.with(a, false);
        if (seen.insert(next).second) work.push_back(next);
      }
    }
  }
  std::vector<Bucket> out;
  for (const auto& b : seen) {
    if (decomp.admits(b)) out.push_back(b);
  }
  return out;
}

inline std::vector<Bucket> focused_buckets(const Decomposition& decomp,
                                           std::string_view target) {
  return focused_buckets(decomp, decomp.index_of(target));
}

}  // namespace bucketeer

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

#include <array>
#include <charconv>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bucketeer/bucket.hpp"
#include "bucketeer/decomposition.hpp"
#include "bucketeer/error.hpp"
#include "bucketeer/rng.hpp"

namespace bucketeer {

using Json = nlohmann::ordered_json;

template <class P>
struct Case {
  typename P::Input input;
  typename P::Output output;

  friend bool operator==(const Case&, const Case&) = default;
};

template <class P>
using Checker = bool (*)(const typename P::Input&, const typename P::Output&);

enum class GenMode { trivial, nontrivial };

// Size limits shared by every random generator. Trivial mode lifts the
// minimums so empty inputs and outputs become possible.
struct ListLimits {
  std::size_t min_out_len = 3;
  std::size_t max_out_len = 10;
  std::size_t min_edges = 2;
};

// Shape every built-in problem (Toposortacle, Sortacle, Matcher) provides.
template <class P>
concept Problem = requires(const typename P::Input& in,
                           const typename P::Output& out, const Json& j,
                           Rng& rng) {
  { P::name } -> std::convertible_to<std::string_view>;
  { P::checker(std::string_view{}) } -> std::same_as<Checker<P>>;
  P::validate(in, out);
  { P::encode_input(in) } -> std::same_as<Json>;
  { P::encode_output(out) } -> std::same_as<Json>;
  { P::decode_input(j) } -> std::same_as<typename P::Input>;
  { P::decode_output(j) } -> std::same_as<typename P::Output>;
  typename P::Knobs;
  typename P::Bounds;
  { P::generate(ListLimits{}, typename P::Knobs{}, rng, GenMode::trivial) }
      -> std::same_as<Case<P>>;
};

template <class P>
Json encode_case(const Case<P>& c) {
  Json j;
  j["input"] = P::encode_input(c.input);
  j["output"] = P::encode_output(c.output);
  return j;
}

template <class P>
Case<P> decode_case(const Json& j) {
  if (!j.is_object() || !j.contains("input") || !j.contains("output")) {
    throw InputError("test case must be an object with input and output");
  }
  Case<P> c{P::decode_input(j.at("input")), P::decode_output(j.at("output"))};
  P::validate(c.input, c.output);
  return c;
}

// Scope limits are plain counts named by `P::bound_fields`.
template <class P>
Json encode_bounds(const typename P::Bounds& b) {
  Json j = Json::object();
  for (const auto& [key, field] : P::bound_fields) j[std::string(key)] = b.*field;
  return j;
}

template <class P>
typename P::Bounds decode_bounds(const Json& j) {
  typename P::Bounds b;
  for (const auto& [key, field] : P::bound_fields) {
    const std::string k(key);
    if (!j.contains(k) || !j[k].is_number_unsigned()) {
      throw InputError("bounds need a non-negative '" + k + "'");
    }
    b.*field = j[k].template get<std::size_t>();
  }
  return b;
}

// Overrides fields of `base` from a "key=value,key=value" list.
template <class P>
typename P::Bounds parse_bounds(std::string_view spec,
                                typename P::Bounds base = {}) {
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{}
                                           : spec.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("bound '" + std::string(item) + "' is not key=value");
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    std::size_t parsed = 0;
    const auto [end, ec] =
        std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || end != value.data() + value.size()) {
      throw InputError("bound '" + std::string(key) + "' needs a count");
    }
    bool known = false;
    for (const auto& [name, field] : P::bound_fields) {
      if (name == key) {
        base.*field = parsed;
        known = true;
      }
    }
    if (!known) {
      throw InputError("unknown bound '" + std::string(key) + "' for " +
                       std::string(P::name));
    }
  }
  return base;
}

// A decomposition whose subproperties are bound to executable checkers.
template <class P>
class BucketChecker {
 public:
  using Overrides = std::map<std::string, Checker<P>, std::less<>>;

  explicit BucketChecker(Decomposition decomp, Overrides overrides = {})
      : decomp_(std::move(decomp)) {
    if (decomp_.problem() != P::name) {
      throw InputError("manifest is for '" + decomp_.problem() +
                       "', not '" + std::string(P::name) + "'");
    }
    for (const auto& sub : decomp_.subproperties()) {
      Checker<P> fn = nullptr;
      if (auto it = overrides.find(sub.name); it != overrides.end()) {
        fn = it->second;
      } else {
        fn = P::checker(sub.name);
      }
      if (fn == nullptr) {
        throw InputError("no checker named '" + sub.name + "' for " +
                         std::string(P::name));
      }
      checkers_.push_back(fn);
    }
  }

  const Decomposition& decomposition() const noexcept { return decomp_; }
  std::size_t size() const noexcept { return checkers_.size(); }

  // Truth value of every subproperty on a pair already known to be
  // well-formed.
  Bucket evaluate_unchecked(const typename P::Input& in,
                            const typename P::Output& out) const {
    std::uint64_t truth = 0;
    for (std::size_t i = 0; i < checkers_.size(); ++i) {
      if (checkers_[i](in, out)) truth |= 1ULL << i;
    }
    return {truth, checkers_.size()};
  }

  Bucket evaluate(const Case<P>& c) const {
    P::validate(c.input, c.output);
    return evaluate_unchecked(c.input, c.output);
  }

  bool check(std::size_t sub, const Case<P>& c) const {
    P::validate(c.input, c.output);
    return checkers_.at(sub)(c.input, c.output);
  }

  // Conjunction of the core subproperties; error subproperties are markers
  // implied by the core and take no part in correctness.
  bool full_property(const Case<P>& c) const {
    P::validate(c.input, c.output);
    return full_property_unchecked(c.input, c.output);
  }

  bool full_property_unchecked(const typename P::Input& in,
                               const typename P::Output& out) const {
    for (std::size_t i = 0; i < checkers_.size(); ++i) {
      if (decomp_[i].kind == SubpropertyKind::core && !checkers_[i](in, out)) {
        return false;
      }
    }
    return true;
  }

 private:
  Decomposition decomp_;
  std::vector<Checker<P>> checkers_;
};

// True iff every subproperty's checker agrees with the bucket's assignment.
// Malformed pairs raise InputError rather than yielding false.
template <class P>
bool bucket_satisfied_by(const BucketChecker<P>& checker, const Bucket& bucket,
                         const Case<P>& c) {
  if (bucket.width() != checker.size()) {
    throw InputError("bucket width does not match decomposition");
  }
  return checker.evaluate(c) == bucket;
}

}  // namespace bucketeer

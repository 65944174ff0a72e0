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
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "bucketeer/error.hpp"
#include "bucketeer/problem.hpp"
#include "bucketeer/rng.hpp"

namespace bucketeer {

// Sorted on age; name is satellite data.
struct Person {
  int age = 0;
  std::string name;

  friend bool operator==(const Person&, const Person&) = default;
  friend auto operator<=>(const Person& a, const Person& b) {
    return std::tie(a.age, a.name) <=> std::tie(b.age, b.name);
  }
};

using PersonList = std::vector<Person>;

namespace sort {

inline bool same_size(const PersonList& in, const PersonList& out) {
  return in.size() == out.size();
}

// Ages never decrease along the output.
inline bool ordered(const PersonList&, const PersonList& out) {
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].age < out[i - 1].age) return false;
  }
  return true;
}

// Same set of people, ignoring multiplicity.
inline bool same_elements_weak(const PersonList& in, const PersonList& out) {
  PersonList a = in, b = out;
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return a == b;
}

// Same multiset of people.
inline bool same_elements_strong(const PersonList& in, const PersonList& out) {
  PersonList a = in, b = out;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline std::string letter_name(std::size_t i) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  } while (i-- > 0);
  return s;
}

}  // namespace sort

struct SortKnobs {
  int max_age = 4;
  std::size_t names = 3;
};

struct SortBounds {
  std::size_t max_length = 4;
  std::size_t ages = 3;
  std::size_t names = 2;
  friend bool operator==(const SortBounds&, const SortBounds&) = default;
};

struct Sortacle {
  using Input = PersonList;
  using Output = PersonList;
  using Knobs = SortKnobs;
  using Bounds = SortBounds;
  static constexpr std::string_view name = "sortacle";
  static constexpr std::array<std::pair<std::string_view, std::size_t SortBounds::*>,
                               3>
      bound_fields{{
          {"length", &SortBounds::max_length},
          {"ages", &SortBounds::ages},
          {"names", &SortBounds::names},
      }};

  static Checker<Sortacle> checker(std::string_view sub) {
    static const std::map<std::string_view, Checker<Sortacle>> table = {
        {"SAME-SIZE", &sort::same_size},
        {"ORDERED", &sort::ordered},
        {"SAME-ELES-WEAK", &sort::same_elements_weak},
        {"SAME-ELES-STRONG", &sort::same_elements_strong},
    };
    auto it = table.find(sub);
    return it == table.end() ? nullptr : it->second;
  }

  static void validate(const Input& in, const Output& out) {
    for (const auto* list : {&in, &out}) {
      for (const auto& p : *list) {
        if (p.age < 0) throw InputError("person age must be non-negative");
      }
    }
  }

  static Json encode_list(const PersonList& people) {
    Json j = Json::array();
    for (const auto& p : people) {
      Json o;
      o["age"] = p.age;
      o["name"] = p.name;
      j.push_back(std::move(o));
    }
    return j;
  }

  static PersonList decode_list(const Json& j) {
    if (!j.is_array()) throw InputError("sortacle list must be a list");
    PersonList out;
    for (const auto& o : j) {
      if (!o.is_object() || o.size() != 2 || !o.contains("age") ||
          !o.contains("name") || !o["age"].is_number_integer() ||
          !o["name"].is_string()) {
        throw InputError("person must be {\"age\": int, \"name\": str}");
      }
      out.push_back(Person{o["age"].get<int>(), o["name"].get<std::string>()});
    }
    return out;
  }

  static Json encode_input(const Input& in) { return encode_list(in); }
  static Json encode_output(const Output& out) { return encode_list(out); }
  static Input decode_input(const Json& j) { return decode_list(j); }
  static Output decode_output(const Json& j) { return decode_list(j); }

  static std::string knobs_digest(const Knobs& k) {
    return "age" + std::to_string(k.max_age) + "names" + std::to_string(k.names);
  }

  // True when some relabeling of the pair (ages order-preserving, names
  // arbitrary) lies inside the bounded space.
  static bool covered_by(const Case<Sortacle>& c, const SortBounds& b) {
    std::set<int> ages;
    std::set<std::string> names;
    for (const auto* list : {&c.input, &c.output}) {
      if (list->size() > b.max_length) return false;
      for (const auto& p : *list) {
        ages.insert(p.age);
        names.insert(p.name);
      }
    }
    return ages.size() <= b.ages && names.size() <= b.names;
  }

  static Case<Sortacle> generate(const ListLimits& limits, const Knobs& knobs,
                                 Rng& rng, GenMode mode);

  class Space;
};

// The output starts as a copy of the input and passes through a pipeline of
// perturbations, each applied independently with probability 1/2.
inline Case<Sortacle> Sortacle::generate(const ListLimits& limits,
                                         const Knobs& knobs, Rng& rng,
                                         GenMode mode) {
  auto person = [&] {
    return Person{static_cast<int>(rng.uniform(0, knobs.max_age)),
                  sort::letter_name(rng.uniform(0, knobs.names - 1))};
  };
  const std::size_t len = rng.uniform(
      mode == GenMode::trivial ? 0 : limits.min_out_len, limits.max_out_len);
  PersonList in(len);
  for (auto& p : in) p = person();

  PersonList out = in;
  if (rng.chance(1, 2)) rng.shuffle(out);
  if (rng.chance(1, 2)) {
    std::stable_sort(out.begin(), out.end(),
                     [](const Person& a, const Person& b) { return a.age < b.age; });
  }
  if (rng.chance(1, 2) && !out.empty()) {
    out.erase(out.begin() + rng.uniform(0, out.size() - 1));
  }
  if (rng.chance(1, 2) && !out.empty()) {
    const Person copy = out[rng.uniform(0, out.size() - 1)];
    out.insert(out.begin() + rng.uniform(0, out.size()), copy);
  }
  if (rng.chance(1, 2)) {
    out.insert(out.begin() + rng.uniform(0, out.size()), person());
  }
  if (rng.chance(1, 2) && !out.empty()) {
    out[rng.uniform(0, out.size() - 1)].name =
        sort::letter_name(rng.uniform(0, knobs.names - 1));
  }
  return {std::move(in), std::move(out)};
}

// Lists over the person domain (ages 0..ages-1, names "a", "b", ...), shortest
// first and lexicographic within a length. Every input meets every output.
// There is no symmetry reduction for this problem.
class Sortacle::Space {
 public:
  Space(const SortBounds& bounds, bool canonical) : canonical_(canonical) {
    std::vector<Person> domain;
    for (std::size_t a = 0; a < bounds.ages; ++a) {
      for (std::size_t n = 0; n < bounds.names; ++n) {
        domain.push_back(Person{static_cast<int>(a), sort::letter_name(n)});
      }
    }
    std::sort(domain.begin(), domain.end());
    PersonList prefix;
    for (std::size_t len = 0; len <= bounds.max_length; ++len) {
      lists(domain, len, prefix);
    }
    size_ = static_cast<std::uint64_t>(lists_.size()) * lists_.size();
  }

  static double estimate(const SortBounds& b) {
    const double d = static_cast<double>(b.ages * b.names);
    double count = 0, p = 1;
    for (std::size_t l = 0; l <= b.max_length; ++l) {
      count += p;
      p *= d;
    }
    return count * count;
  }

  const std::vector<PersonList>& inputs() const noexcept { return lists_; }
  const std::vector<PersonList>& outputs_for(std::size_t) const noexcept {
    return lists_;
  }
  std::uint64_t size() const noexcept { return size_; }
  bool canonical() const noexcept { return canonical_; }

 private:
  void lists(const std::vector<Person>& domain, std::size_t len,
             PersonList& prefix) {
    if (prefix.size() == len) {
      lists_.push_back(prefix);
      return;
    }
    for (const auto& p : domain) {
      prefix.push_back(p);
      lists(domain, len, prefix);
      prefix.pop_back();
    }
  }

  bool canonical_;
  std::vector<PersonList> lists_;
  std::uint64_t size_ = 0;
};

}  // namespace bucketeer

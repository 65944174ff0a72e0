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
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bucketeer/error.hpp"
#include "bucketeer/problem.hpp"
#include "bucketeer/rng.hpp"

namespace bucketeer {

// Preference lists, most preferred first. Indices identify members of the
// opposite side.
struct MatchInput {
  std::vector<std::vector<int>> candidates;
  std::vector<std::vector<int>> companies;
  friend bool operator==(const MatchInput&, const MatchInput&) = default;
};

// (candidate, company) pairs, kept sorted and duplicate-free.
struct MatchOutput {
  std::vector<std::pair<int, int>> pairs;
  friend bool operator==(const MatchOutput&, const MatchOutput&) = default;
};

namespace match {

inline bool uniqueness(const MatchInput&, const MatchOutput& out) {
  std::vector<int> cs, fs;
  for (const auto& [c, f] : out.pairs) {
    cs.push_back(c);
    fs.push_back(f);
  }
  std::sort(cs.begin(), cs.end());
  std::sort(fs.begin(), fs.end());
  return std::adjacent_find(cs.begin(), cs.end()) == cs.end() &&
         std::adjacent_find(fs.begin(), fs.end()) == fs.end();
}

inline bool complete_candidates(const MatchInput& in, const MatchOutput& out) {
  std::vector<bool> hit(in.candidates.size(), false);
  for (const auto& [c, f] : out.pairs) hit[c] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

inline bool complete_companies(const MatchInput& in, const MatchOutput& out) {
  std::vector<bool> hit(in.companies.size(), false);
  for (const auto& [c, f] : out.pairs) hit[f] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

inline std::size_t rank(const std::vector<int>& prefs, int who) {
  auto it = std::find(prefs.begin(), prefs.end(), who);
  return it == prefs.end() ? std::numeric_limits<std::size_t>::max()
                           : static_cast<std::size_t>(it - prefs.begin());
}

// `prefs` owner would leave every current partner for `other`. Unmatched
// owners always would.
inline bool would_switch(const std::vector<int>& prefs,
                         const std::vector<int>& partners, int other) {
  const std::size_t r = rank(prefs, other);
  return std::all_of(partners.begin(), partners.end(),
                     [&](int p) { return r < rank(prefs, p); });
}

// No unmatched (candidate, company) pair would both rather be together than
// with any of their current partners.
inline bool stable(const MatchInput& in, const MatchOutput& out) {
  const auto nc = in.candidates.size(), nf = in.companies.size();
  std::vector<std::vector<int>> of_candidate(nc), of_company(nf);
  for (const auto& [c, f] : out.pairs) {
    of_candidate[c].push_back(f);
    of_company[f].push_back(c);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t f = 0; f < nf; ++f) {
      if (std::binary_search(out.pairs.begin(), out.pairs.end(),
                             std::pair<int, int>(c, f))) {
        continue;
      }
      if (would_switch(in.candidates[c], of_candidate[c], static_cast<int>(f)) &&
          would_switch(in.companies[f], of_company[f], static_cast<int>(c))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace match

struct MatchKnobs {
  std::size_t min_side = 1;
  std::size_t max_side = 3;
};

struct MatchBounds {
  std::size_t max_side = 3;
  friend bool operator==(const MatchBounds&, const MatchBounds&) = default;
};

struct Matcher {
  using Input = MatchInput;
  using Output = MatchOutput;
  using Knobs = MatchKnobs;
  using Bounds = MatchBounds;
  static constexpr std::string_view name = "matcher";
  static constexpr std::array<std::pair<std::string_view, std::size_t MatchBounds::*>,
                               1>
      bound_fields{{
          {"side", &MatchBounds::max_side},
      }};

  static Checker<Matcher> checker(std::string_view sub) {
    static const std::map<std::string_view, Checker<Matcher>> table = {
        {"STABLE", &match::stable},
        {"UNIQUENESS", &match::uniqueness},
        {"COMPLETE-CANDIDATES", &match::complete_candidates},
        {"COMPLETE-COMPANIES", &match::complete_companies},
    };
    auto it = table.find(sub);
    return it == table.end() ? nullptr : it->second;
  }

  // Preference lists must be complete: each one orders the whole other side.
  static void validate_prefs(const std::vector<std::vector<int>>& lists,
                             std::size_t other_side, std::string_view who) {
    for (const auto& prefs : lists) {
      std::vector<int> sorted = prefs;
      std::sort(sorted.begin(), sorted.end());
      bool ok = sorted.size() == other_side;
      for (std::size_t i = 0; ok && i < sorted.size(); ++i) {
        ok = sorted[i] == static_cast<int>(i);
      }
      if (!ok) {
        throw InputError(std::string(who) +
                         " preference list must rank every member of the other side once");
      }
    }
  }

  static void validate(const Input& in, const Output& out) {
    const auto nc = static_cast<int>(in.candidates.size());
    const auto nf = static_cast<int>(in.companies.size());
    validate_prefs(in.candidates, in.companies.size(), "candidate");
    validate_prefs(in.companies, in.candidates.size(), "company");
    for (const auto& [c, f] : out.pairs) {
      if (c < 0 || c >= nc || f < 0 || f >= nf) {
        throw InputError("pair (" + std::to_string(c) + "," +
                         std::to_string(f) + ") is out of range for " +
                         std::to_string(nc) + " candidates and " +
                         std::to_string(nf) + " companies");
      }
    }
    if (!std::is_sorted(out.pairs.begin(), out.pairs.end()) ||
        std::adjacent_find(out.pairs.begin(), out.pairs.end()) !=
            out.pairs.end()) {
      throw InputError("matching must be a sorted, duplicate-free set");
    }
  }

  static Json encode_input(const Input& in) {
    Json j;
    j["candidates"] = in.candidates;
    j["companies"] = in.companies;
    return j;
  }

  static Json encode_output(const Output& out) {
    Json j = Json::array();
    for (const auto& [c, f] : out.pairs) j.push_back(Json::array({c, f}));
    return j;
  }

  static std::vector<std::vector<int>> decode_prefs(const Json& j) {
    if (!j.is_array()) throw InputError("preferences must be a list of lists");
    std::vector<std::vector<int>> out;
    for (const auto& list : j) {
      if (!list.is_array()) throw InputError("preference list must be a list");
      std::vector<int> prefs;
      for (const auto& x : list) {
        if (!x.is_number_integer()) throw InputError("preference must be an int");
        prefs.push_back(x.get<int>());
      }
      out.push_back(std::move(prefs));
    }
    return out;
  }

  static Input decode_input(const Json& j) {
    if (!j.is_object() || !j.contains("candidates") ||
        !j.contains("companies")) {
      throw InputError("matcher input must have candidates and companies");
    }
    return {decode_prefs(j["candidates"]), decode_prefs(j["companies"])};
  }

  // Set semantics: a repeated pair is rejected rather than collapsed.
  static Output decode_output(const Json& j) {
    if (!j.is_array()) throw InputError("matcher output must be a list");
    Output out;
    for (const auto& p : j) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
          !p[1].is_number_integer()) {
        throw InputError("matcher pair must be [int, int]");
      }
      out.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    if (std::adjacent_find(out.pairs.begin(), out.pairs.end()) !=
        out.pairs.end()) {
      throw InputError("matcher output repeats a pair");
    }
    return out;
  }

  static std::string knobs_digest(const Knobs& k) {
    return "side" + std::to_string(k.min_side) + ".." +
           std::to_string(k.max_side);
  }

  static bool covered_by(const Case<Matcher>& c, const MatchBounds& b) {
    return c.input.candidates.size() <= b.max_side &&
           c.input.companies.size() <= b.max_side;
  }

  static Case<Matcher> generate(const ListLimits& limits, const Knobs& knobs,
                                Rng& rng, GenMode mode);

  class Space;
};

// Side sizes are drawn independently. Preference lists are uniform
// permutations of the opposite side; the output is a uniform subset of
// candidate x company pairs of size at most max(sides) + 2.
inline Case<Matcher> Matcher::generate(const ListLimits&, const Knobs& knobs,
                                       Rng& rng, GenMode mode) {
  const std::size_t lo = mode == GenMode::trivial ? 0 : knobs.min_side;
  const std::size_t nc = rng.uniform(lo, knobs.max_side);
  const std::size_t nf = rng.uniform(lo, knobs.max_side);
  auto prefs = [&](std::size_t owners, std::size_t others) {
    std::vector<std::vector<int>> lists(owners);
    for (auto& l : lists) {
      l.resize(others);
      std::iota(l.begin(), l.end(), 0);
      rng.shuffle(l);
    }
    return lists;
  };
  MatchInput in{prefs(nc, nf), prefs(nf, nc)};

  std::vector<std::pair<int, int>> all;
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t f = 0; f < nf; ++f) all.emplace_back(c, f);
  }
  const std::size_t size =
      rng.uniform(0, std::min(all.size(), std::max(nc, nf) + 2));
  rng.shuffle(all);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return {std::move(in), MatchOutput{std::move(all)}};
}

// Side sizes 0..max_side each; all preference permutations; all subsets of
// pairs, in increasing bitmask order (bit c * companies + f). In canonical
// mode candidate 0 ranks companies in index order, which removes company
// relabelings.
class Matcher::Space {
 public:
  Space(const MatchBounds& bounds, bool canonical) : canonical_(canonical) {
    const std::size_t s = bounds.max_side;
    groups_.resize((s + 1) * (s + 1));
    for (std::size_t nc = 0; nc <= s; ++nc) {
      for (std::size_t nf = 0; nf <= s; ++nf) {
        auto& outs = groups_[nc * (s + 1) + nf];
        const std::size_t cells = nc * nf;
        for (std::uint64_t mask = 0; mask < (1ULL << cells); ++mask) {
          MatchOutput out;
          for (std::size_t b = 0; b < cells; ++b) {
            if ((mask >> b) & 1U) out.pairs.emplace_back(b / nf, b % nf);
          }
          outs.push_back(std::move(out));
        }
        add_inputs(nc, nf, nc * (s + 1) + nf);
      }
    }
    for (std::size_t g : group_) size_ += groups_[g].size();
  }

  static double estimate(const MatchBounds& b) {
    double total = 0;
    for (std::size_t nc = 0; nc <= b.max_side; ++nc) {
      for (std::size_t nf = 0; nf <= b.max_side; ++nf) {
        total += std::pow(factorial(nf), nc) * std::pow(factorial(nc), nf) *
                 std::pow(2.0, nc * nf);
      }
    }
    return total;
  }

  const std::vector<MatchInput>& inputs() const noexcept { return inputs_; }
  const std::vector<MatchOutput>& outputs_for(std::size_t input) const {
    return groups_[group_[input]];
  }
  std::uint64_t size() const noexcept { return size_; }
  bool canonical() const noexcept { return canonical_; }

 private:
  static double factorial(std::size_t n) {
    double f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
  }

  static std::vector<std::vector<int>> permutations(std::size_t n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
      out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }

  void add_inputs(std::size_t nc, std::size_t nf, std::size_t group) {
    const auto cperms = permutations(nf);
    const auto fperms = permutations(nc);
    // Odometer over nc candidate lists then nf company lists.
    std::vector<std::size_t> digit(nc + nf, 0);
    auto radix = [&](std::size_t i) {
      if (i < nc) return (canonical_ && i == 0) ? std::size_t{1} : cperms.size();
      return fperms.size();
    };
    while (true) {
      MatchInput in;
      for (std::size_t i = 0; i < nc; ++i) in.candidates.push_back(cperms[digit[i]]);
      for (std::size_t i = 0; i < nf; ++i) in.companies.push_back(fperms[digit[nc + i]]);
      inputs_.push_back(std::move(in));
      group_.push_back(group);
      std::size_t i = digit.size();
      while (i > 0) {
        --i;
        if (++digit[i] < radix(i)) break;
        digit[i] = 0;
        if (i == 0) return;
      }
      if (digit.empty()) return;
    }
  }

  bool canonical_;
  std::vector<MatchInput> inputs_;
  std::vector<std::size_t> group_;
  std::vector<std::vector<MatchOutput>> groups_;
  std::uint64_t size_ = 0;
};

}  // namespace bucketeer

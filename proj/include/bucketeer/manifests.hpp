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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bucketeer/decomposition.hpp"
#include "bucketeer/error.hpp"

namespace bucketeer::manifests {

// Toposortacle with the two error subproperties. Every implication listed
// here holds within the default bounds (`bucketeer implies` confirms them);
// the last three keep focused buckets concretizable.
inline constexpr std::string_view kToposortacle = R"({
  "problem": "toposortacle",
  "subproperties": [
    {"name": "NO-NEW", "kind": "core",
     "description": "every output vertex occurs in some input edge"},
    {"name": "NONE-DROPPED", "kind": "core",
     "description": "every input vertex occurs in the output"},
    {"name": "UNIQUENESS", "kind": "core",
     "description": "no output vertex repeats"},
    {"name": "SORTEDNESS", "kind": "core",
     "description": "no output pair is reversed in the transitive closure"},
    {"name": "SAME-NUM-VERTICES", "kind": "error",
     "description": "output length equals the number of input vertices"},
    {"name": "INCOMINGEDGECOUNT", "kind": "error",
     "description": "each output vertex is preceded by exactly its in-degree of predecessors"}
  ],
  "implications": [
    {"if": ["NO-NEW", "NONE-DROPPED", "UNIQUENESS"], "then": "SAME-NUM-VERTICES"},
    {"if": ["NONE-DROPPED", "SAME-NUM-VERTICES"], "then": "NO-NEW"},
    {"if": ["NONE-DROPPED", "SAME-NUM-VERTICES"], "then": "UNIQUENESS"},
    {"if": ["NONE-DROPPED", "UNIQUENESS", "SORTEDNESS"], "then": "INCOMINGEDGECOUNT"}
  ]
})";

// Two-subproperty view: SAME-ELEMENTS in its multiset reading.
inline constexpr std::string_view kToposortacleMerged = R"({
  "problem": "toposortacle",
  "subproperties": [
    {"name": "SAME-ELEMENTS", "kind": "core",
     "description": "output lists each input vertex exactly once"},
    {"name": "SAME-NUM-VERTICES", "kind": "error"}
  ],
  "implications": [
    {"if": ["SAME-ELEMENTS"], "then": "SAME-NUM-VERTICES"}
  ]
})";

// Same view with SAME-ELEMENTS read as set equality. The implication is not
// declared here because it does not hold: [1,2,3,3] for [(1,2),(2,3)].
inline constexpr std::string_view kToposortacleMergedSet = R"({
  "problem": "toposortacle",
  "subproperties": [
    {"name": "SAME-ELEMENTS-SET", "kind": "core"},
    {"name": "SAME-NUM-VERTICES", "kind": "error"}
  ],
  "implications": []
})";

inline constexpr std::string_view kSortacle = R"({
  "problem": "sortacle",
  "subproperties": [
    {"name": "SAME-SIZE", "kind": "core"},
    {"name": "ORDERED", "kind": "core"},
    {"name": "SAME-ELES-WEAK", "kind": "core"},
    {"name": "SAME-ELES-STRONG", "kind": "core"}
  ],
  "implications": [
    {"if": ["SAME-ELES-STRONG"], "then": "SAME-ELES-WEAK"},
    {"if": ["SAME-ELES-STRONG"], "then": "SAME-SIZE"}
  ]
})";

inline constexpr std::string_view kMatcher = R"({
  "problem": "matcher",
  "subproperties": [
    {"name": "STABLE", "kind": "core"},
    {"name": "UNIQUENESS", "kind": "core"},
    {"name": "COMPLETE-CANDIDATES", "kind": "core"},
    {"name": "COMPLETE-COMPANIES", "kind": "core"}
  ],
  "implications": []
})";

inline const std::map<std::string, std::string_view, std::less<>>& builtin() {
  static const std::map<std::string, std::string_view, std::less<>> table = {
      {"toposortacle", kToposortacle},
      {"toposortacle-merged", kToposortacleMerged},
      {"toposortacle-merged-set", kToposortacleMergedSet},
      {"sortacle", kSortacle},
      {"matcher", kMatcher},
  };
  return table;
}

inline Decomposition load_builtin(std::string_view name) {
  const auto& table = builtin();
  auto it = table.find(name);
  if (it == table.end()) {
    throw InputError("no built-in manifest named '" + std::string(name) + "'");
  }
  return Decomposition::parse(it->second);
}

}  // namespace bucketeer::manifests

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

// Reference and deliberately buggy predicates speaking the harness line
// protocol. Used by the test suite and as examples of predicate programs.

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include "bucketeer/bucketeer.hpp"

using namespace bucketeer;

namespace {

using LineJudge = std::function<bool(const Json&)>;

// Decodes the pair as problem P; malformed or invalid pairs are rejected.
template <class P>
LineJudge judge(bool (*accept)(const typename P::Input&, const typename P::Output&)) {
  return [accept](const Json& j) {
    try {
      const auto c = decode_case<P>(j);
      return accept(c.input, c.output);
    } catch (const InputError&) {
      return false;
    }
  };
}

bool topo_reference(const TopoInput& in, const TopoOutput& out) {
  return topo::no_new(in, out) && topo::none_dropped(in, out) &&
         topo::uniqueness(in, out) && topo::sortedness(in, out);
}

// Judges set equality by the output length alone.
bool topo_length_only(const TopoInput& in, const TopoOutput& out) {
  return topo::same_num_vertices(in, out) && topo::sortedness(in, out);
}

bool topo_missing_uniqueness(const TopoInput& in, const TopoOutput& out) {
  return topo::no_new(in, out) && topo::none_dropped(in, out) &&
         topo::sortedness(in, out);
}

// Only neighboring output positions are checked, and only against direct
// edges.
bool topo_nontransitive_sortedness(const TopoInput& in, const TopoOutput& out) {
  if (!(topo::no_new(in, out) && topo::none_dropped(in, out) &&
        topo::uniqueness(in, out))) {
    return false;
  }
  const auto& o = out.vertices;
  for (std::size_t i = 0; i + 1 < o.size(); ++i) {
    for (const auto& e : in.edges) {
      if (e.first == o[i + 1] && e.second == o[i]) return false;
    }
  }
  return true;
}

// Counts predecessors instead of checking the order.
bool topo_incoming_edge_count(const TopoInput& in, const TopoOutput& out) {
  return topo::no_new(in, out) && topo::none_dropped(in, out) &&
         topo::incoming_edge_count(in, out);
}

bool sort_reference(const PersonList& in, const PersonList& out) {
  return sort::same_size(in, out) && sort::ordered(in, out) &&
         sort::same_elements_strong(in, out);
}

// Compares people as sets.
bool sort_weak_set(const PersonList& in, const PersonList& out) {
  return sort::same_size(in, out) && sort::ordered(in, out) &&
         sort::same_elements_weak(in, out);
}

bool match_reference(const MatchInput& in, const MatchOutput& out) {
  return match::stable(in, out) && match::uniqueness(in, out) &&
         match::complete_candidates(in, out) && match::complete_companies(in, out);
}

// Never checks that every company is matched.
bool match_candidate_only(const MatchInput& in, const MatchOutput& out) {
  return match::stable(in, out) && match::uniqueness(in, out) &&
         match::complete_candidates(in, out);
}

const std::map<std::string, LineJudge>& judges() {
  static const std::map<std::string, LineJudge> table = {
      {"topo-reference", judge<Toposortacle>(topo_reference)},
      {"topo-length-only", judge<Toposortacle>(topo_length_only)},
      {"topo-missing-uniqueness", judge<Toposortacle>(topo_missing_uniqueness)},
      {"topo-nontransitive-sortedness",
       judge<Toposortacle>(topo_nontransitive_sortedness)},
      {"topo-incoming-edge-count", judge<Toposortacle>(topo_incoming_edge_count)},
      {"sort-reference", judge<Sortacle>(sort_reference)},
      {"sort-weak-set", judge<Sortacle>(sort_weak_set)},
      {"match-reference", judge<Matcher>(match_reference)},
      {"match-candidate-only", judge<Matcher>(match_candidate_only)},
      {"always-true", [](const Json&) { return true; }},
      {"always-false", [](const Json&) { return false; }},
  };
  return table;
}

int usage() {
  std::cerr << "usage: bucketeer-fixture <variant>\nvariants:";
  for (const auto& [name, fn] : judges()) std::cerr << " " << name;
  std::cerr << " crash hang garbled crash-on-empty\n";
  return 64;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) return usage();
  const std::string variant = argv[1];
  std::ios::sync_with_stdio(false);
  std::string line;

  if (variant == "crash") {
    while (std::getline(std::cin, line)) std::abort();
    return 0;
  }
  if (variant == "hang") {
    while (std::getline(std::cin, line)) {
      std::this_thread::sleep_for(std::chrono::hours(1));
    }
    return 0;
  }
  if (variant == "garbled") {
    while (std::getline(std::cin, line)) std::cout << "True" << std::endl;
    return 0;
  }
  // Answers false, except that it dies on pairs with an empty output.
  if (variant == "crash-on-empty") {
    while (std::getline(std::cin, line)) {
      const Json j = Json::parse(line);
      if (j.at("output").empty()) _exit(1);
      std::cout << "false" << std::endl;
    }
    return 0;
  }

  const auto it = judges().find(variant);
  if (it == judges().end()) return usage();
  while (std::getline(std::cin, line)) {
    bool verdict = false;
    try {
      verdict = it->second(Json::parse(line));
    } catch (const std::exception&) {
      verdict = false;
    }
    std::cout << (verdict ? "true" : "false") << std::endl;
  }
  return 0;
}

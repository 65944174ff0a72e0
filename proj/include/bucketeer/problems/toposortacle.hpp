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
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bucketeer/error.hpp"
#include "bucketeer/problem.hpp"
#include "bucketeer/rng.hpp"

namespace bucketeer {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

struct TopoInput {
  std::vector<Edge> edges;
  friend bool operator==(const TopoInput&, const TopoInput&) = default;
};

struct TopoOutput {
  std::vector<Vertex> vertices;
  friend bool operator==(const TopoOutput&, const TopoOutput&) = default;
};

// Least transitively closed superset of the edge set.
inline std::set<Edge> transitive_closure(std::span<const Edge> edges) {
  std::set<Edge> closure(edges.begin(), edges.end());
  std::set<Vertex> vertices;
  for (const auto& [m, n] : edges) {
    vertices.insert(m);
    vertices.insert(n);
  }
  // Warshall: after pivot k, paths through {.., k} are closed.
  for (Vertex k : vertices) {
    std::vector<Vertex> into, from;
    for (const auto& [m, n] : closure) {
      if (n == k) into.push_back(m);
      if (m == k) from.push_back(n);
    }
    for (Vertex m : into) {
      for (Vertex n : from) closure.emplace(m, n);
    }
  }
  return closure;
}

namespace topo {

inline std::vector<Vertex> input_vertices(const TopoInput& in) {
  std::vector<Vertex> v;
  v.reserve(in.edges.size() * 2);
  for (const auto& [m, n] : in.edges) {
    v.push_back(m);
    v.push_back(n);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline std::vector<Edge> edge_set(const TopoInput& in) {
  std::vector<Edge> e = in.edges;
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

inline bool contains(const std::vector<Vertex>& sorted, Vertex v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

// Every output vertex occurs in some input edge.
inline bool no_new(const TopoInput& in, const TopoOutput& out) {
  const auto v = input_vertices(in);
  return std::all_of(out.vertices.begin(), out.vertices.end(),
                     [&](Vertex x) { return contains(v, x); });
}

// Every vertex of every input edge occurs in the output.
inline bool none_dropped(const TopoInput& in, const TopoOutput& out) {
  std::vector<Vertex> o = out.vertices;
  std::sort(o.begin(), o.end());
  const auto v = input_vertices(in);
  return std::all_of(v.begin(), v.end(),
                     [&](Vertex x) { return contains(o, x); });
}

// No vertex repeats in the output.
inline bool uniqueness(const TopoInput&, const TopoOutput& out) {
  std::vector<Vertex> o = out.vertices;
  std::sort(o.begin(), o.end());
  return std::adjacent_find(o.begin(), o.end()) == o.end();
}

// No later output vertex precedes an earlier one in the input's partial
// order.
inline bool sortedness(const TopoInput& in, const TopoOutput& out) {
  const auto order = transitive_closure(in.edges);
  const auto& o = out.vertices;
  for (std::size_t i = 0; i < o.size(); ++i) {
    for (std::size_t j = i + 1; j < o.size(); ++j) {
      if (order.count({o[j], o[i]})) return false;
    }
  }
  return true;
}

// As many output entries as vertices mentioned by the input.
inline bool same_num_vertices(const TopoInput& in, const TopoOutput& out) {
  return input_vertices(in).size() == out.vertices.size();
}

// At every position, the number of input edges into that vertex equals
// the number of earlier output positions holding one of its predecessors.
inline bool incoming_edge_count(const TopoInput& in, const TopoOutput& out) {
  const auto edges = edge_set(in);
  const auto& o = out.vertices;
  for (std::size_t k = 0; k < o.size(); ++k) {
    const auto incoming = std::count_if(
        edges.begin(), edges.end(), [&](const Edge& e) { return e.second == o[k]; });
    std::ptrdiff_t preceding = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (std::binary_search(edges.begin(), edges.end(), Edge{o[j], o[k]})) {
        ++preceding;
      }
    }
    if (incoming != preceding) return false;
  }
  return true;
}

// Merged form with multiset meaning: the output lists each input vertex
// exactly once and nothing else.
inline bool same_elements(const TopoInput& in, const TopoOutput& out) {
  return no_new(in, out) && none_dropped(in, out) && uniqueness(in, out);
}

// Merged form with set meaning: set(O) equals the input's vertex set.
inline bool same_elements_set(const TopoInput& in, const TopoOutput& out) {
  return no_new(in, out) && none_dropped(in, out);
}

inline bool acyclic(const std::vector<Edge>& edges) {
  std::map<Vertex, std::vector<Vertex>> succ;
  std::map<Vertex, int> indegree;
  for (const auto& [m, n] : edges) {
    succ[m].push_back(n);
    indegree[n];
    ++indegree[n];
    indegree[m];
  }
  std::vector<Vertex> ready;
  for (const auto& [v, d] : indegree) {
    if (d == 0) ready.push_back(v);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const Vertex v = ready.back();
    ready.pop_back();
    ++seen;
    for (Vertex n : succ[v]) {
      if (--indegree[n] == 0) ready.push_back(n);
    }
  }
  return seen == indegree.size();
}

// Vertices numbered 0, 1, 2, ... in order of first appearance when the edge
// list is read left to right.
inline bool labeled_by_first_appearance(const std::vector<Edge>& edges) {
  Vertex next = 0;
  std::vector<bool> seen;
  auto visit = [&](Vertex v) {
    if (v < 0) return false;
    if (static_cast<std::size_t>(v) < seen.size() && seen[v]) return true;
    if (v != next) return false;
    seen.resize(v + 1, false);
    seen[v] = true;
    ++next;
    return true;
  };
  for (const auto& [m, n] : edges) {
    if (!visit(m) || !visit(n)) return false;
  }
  return true;
}

}  // namespace topo

struct TopoKnobs {
  std::size_t min_vertices = 3;
  std::size_t max_vertices = 5;
};

struct TopoBounds {
  std::size_t max_vertices = 5;
  std::size_t max_edges = 4;
  std::size_t max_output = 5;
  friend bool operator==(const TopoBounds&, const TopoBounds&) = default;
};

struct Toposortacle {
  using Input = TopoInput;
  using Output = TopoOutput;
  using Knobs = TopoKnobs;
  using Bounds = TopoBounds;
  static constexpr std::string_view name = "toposortacle";
  static constexpr std::array<std::pair<std::string_view, std::size_t TopoBounds::*>,
                               3>
      bound_fields{{
          {"vertices", &TopoBounds::max_vertices},
          {"edges", &TopoBounds::max_edges},
          {"output", &TopoBounds::max_output},
      }};

  static Checker<Toposortacle> checker(std::string_view sub) {
    static const std::map<std::string_view, Checker<Toposortacle>> table = {
        {"NO-NEW", &topo::no_new},
        {"NONE-DROPPED", &topo::none_dropped},
        {"UNIQUENESS", &topo::uniqueness},
        {"SORTEDNESS", &topo::sortedness},
        {"SAME-NUM-VERTICES", &topo::same_num_vertices},
        {"INCOMINGEDGECOUNT", &topo::incoming_edge_count},
        {"SAME-ELEMENTS", &topo::same_elements},
        {"SAME-ELEMENTS-SET", &topo::same_elements_set},
    };
    auto it = table.find(sub);
    return it == table.end() ? nullptr : it->second;
  }

  static void validate(const Input& in, const Output& out) {
    for (const auto& [m, n] : in.edges) {
      if (m < 0 || n < 0) throw InputError("vertex ids must be non-negative");
      if (m == n) {
        throw InputError("edge (" + std::to_string(m) + "," +
                         std::to_string(n) + ") is a self-loop");
      }
    }
    for (Vertex v : out.vertices) {
      if (v < 0) throw InputError("vertex ids must be non-negative");
    }
  }

  static Json encode_input(const Input& in) {
    Json j = Json::array();
    for (const auto& [m, n] : in.edges) j.push_back(Json::array({m, n}));
    return j;
  }

  static Json encode_output(const Output& out) {
    Json j = Json::array();
    for (Vertex v : out.vertices) j.push_back(v);
    return j;
  }

  static Input decode_input(const Json& j) {
    if (!j.is_array()) throw InputError("toposortacle input must be a list");
    Input in;
    for (const auto& e : j) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        throw InputError("toposortacle edge must be [int, int]");
      }
      in.edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
    }
    return in;
  }

  static Output decode_output(const Json& j) {
    if (!j.is_array()) throw InputError("toposortacle output must be a list");
    Output out;
    for (const auto& v : j) {
      if (!v.is_number_integer()) {
        throw InputError("toposortacle vertex must be an int");
      }
      out.vertices.push_back(v.get<Vertex>());
    }
    return out;
  }

  static std::string knobs_digest(const Knobs& k) {
    return "v" + std::to_string(k.min_vertices) + ".." +
           std::to_string(k.max_vertices);
  }

  // True when some relabeling of the pair lies inside the bounded space.
  static bool covered_by(const Case<Toposortacle>& c, const TopoBounds& b) {
    const auto in_vertices = topo::input_vertices(c.input);
    std::set<Vertex> vertices(in_vertices.begin(), in_vertices.end());
    vertices.insert(c.output.vertices.begin(), c.output.vertices.end());
    return vertices.size() <= b.max_vertices &&
           topo::edge_set(c.input).size() <= b.max_edges &&
           c.input.edges.size() <= b.max_edges &&
           c.output.vertices.size() <= b.max_output;
  }

  static Case<Toposortacle> generate(const ListLimits& limits,
                                     const Knobs& knobs, Rng& rng,
                                     GenMode mode);

  class Space;
};

// Random permutation of n vertices, then a duplicate-free sample of edges
// that point forward in that permutation, so the input is acyclic. The
// output draws from n + 1 symbols; the extra one is never in the input.
inline Case<Toposortacle> Toposortacle::generate(const ListLimits& limits,
                                                 const Knobs& knobs, Rng& rng,
                                                 GenMode mode) {
  const bool trivial = mode == GenMode::trivial;
  const std::size_t n =
      rng.uniform(trivial ? 0 : knobs.min_vertices, knobs.max_vertices);
  std::vector<Vertex> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Vertex>(i);
  rng.shuffle(order);

  std::vector<Edge> forward;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) forward.emplace_back(order[i], order[j]);
  }
  const std::size_t most = std::min(forward.size(), limits.max_out_len);
  const std::size_t least = trivial ? 0 : std::min(limits.min_edges, most);
  // Sparse graphs are drawn half of the time as well.
  const std::size_t m = rng.uniform(
      least, rng.chance(1, 2) ? std::max(least, std::min(most, n)) : most);
  rng.shuffle(forward);
  forward.resize(m);

  // Half of the outputs stay near the vertex count, where the length-based
  // subproperties can hold.
  const std::size_t shortest = trivial ? 0 : limits.min_out_len;
  const std::size_t longest =
      rng.chance(1, 2) ? std::max(shortest, std::min(limits.max_out_len, n + 1))
                       : limits.max_out_len;
  const std::size_t len = rng.uniform(shortest, longest);
  std::vector<Vertex> out(len);
  for (auto& v : out) v = static_cast<Vertex>(rng.uniform(0, n));
  return {TopoInput{std::move(forward)}, TopoOutput{std::move(out)}};
}

// Every acyclic input within bounds paired with every output within bounds.
// Inputs are edge sets listed in sorted order, shortest first. In canonical
// mode only inputs whose vertices are labeled by first appearance are kept,
// and outputs name vertices outside the input k, k+1, ... by first
// appearance, which removes relabelings of the same pair.
class Toposortacle::Space {
 public:
  Space(const TopoBounds& bounds, bool canonical)
      : bounds_(bounds), canonical_(canonical) {
    const auto v = static_cast<Vertex>(bounds.max_vertices);
    std::vector<Edge> all;
    for (Vertex m = 0; m < v; ++m) {
      for (Vertex n = 0; n < v; ++n) {
        if (m != n) all.emplace_back(m, n);
      }
    }
    std::vector<Edge> chosen;
    for (std::size_t size = 0; size <= std::min(bounds.max_edges, all.size());
         ++size) {
      combine(all, 0, size, chosen);
    }

    if (canonical) {
      groups_.resize(bounds.max_vertices + 1);
      for (std::size_t k = 0; k <= bounds.max_vertices; ++k) {
        std::vector<Vertex> prefix;
        for (std::size_t len = 0; len <= bounds.max_output; ++len) {
          canonical_outputs(k, len, 0, prefix, groups_[k]);
        }
      }
      for (const auto& in : inputs_) {
        group_.push_back(topo::input_vertices(in).size());
      }
    } else {
      groups_.resize(1);
      std::vector<Vertex> prefix;
      for (std::size_t len = 0; len <= bounds.max_output; ++len) {
        all_outputs(len, prefix, groups_[0]);
      }
      group_.assign(inputs_.size(), 0);
    }
    for (std::size_t g : group_) size_ += groups_[g].size();
  }

  // Upper bound on the pair count, computed without building the space.
  static double estimate(const TopoBounds& b) {
    const double v = static_cast<double>(b.max_vertices);
    const double pairs = v * (v - 1);
    double inputs = 0, term = 1;
    for (std::size_t k = 0; k <= b.max_edges && k <= pairs; ++k) {
      inputs += term;
      term = term * (pairs - k) / (k + 1);
    }
    double outputs = 0, p = 1;
    for (std::size_t l = 0; l <= b.max_output; ++l) {
      outputs += p;
      p *= v;
    }
    return inputs * outputs;
  }

  const std::vector<TopoInput>& inputs() const noexcept { return inputs_; }
  const std::vector<TopoOutput>& outputs_for(std::size_t input) const {
    return groups_[group_[input]];
  }
  std::uint64_t size() const noexcept { return size_; }
  bool canonical() const noexcept { return canonical_; }

 private:
  void combine(const std::vector<Edge>& all, std::size_t from,
               std::size_t remaining, std::vector<Edge>& chosen) {
    if (remaining == 0) {
      if (!topo::acyclic(chosen)) return;
      if (canonical_ && !topo::labeled_by_first_appearance(chosen)) return;
      inputs_.push_back(TopoInput{chosen});
      return;
    }
    for (std::size_t i = from; i + remaining <= all.size(); ++i) {
      chosen.push_back(all[i]);
      combine(all, i + 1, remaining - 1, chosen);
      chosen.pop_back();
    }
  }

  void canonical_outputs(std::size_t k, std::size_t len, std::size_t fresh,
                         std::vector<Vertex>& prefix,
                         std::vector<TopoOutput>& sink) const {
    if (prefix.size() == len) {
      sink.push_back(TopoOutput{prefix});
      return;
    }
    // Labels below `top` are in use; `top` itself may be introduced while
    // the distinct-vertex budget allows it.
    const std::size_t top = k + fresh;
    const std::size_t choices = top + (top < bounds_.max_vertices ? 1 : 0);
    for (std::size_t v = 0; v < choices; ++v) {
      prefix.push_back(static_cast<Vertex>(v));
      canonical_outputs(k, len, v == top ? fresh + 1 : fresh, prefix, sink);
      prefix.pop_back();
    }
  }

  void all_outputs(std::size_t len, std::vector<Vertex>& prefix,
                   std::vector<TopoOutput>& sink) const {
    if (prefix.size() == len) {
      sink.push_back(TopoOutput{prefix});
      return;
    }
    for (std::size_t v = 0; v < bounds_.max_vertices; ++v) {
      prefix.push_back(static_cast<Vertex>(v));
      all_outputs(len, prefix, sink);
      prefix.pop_back();
    }
  }

  TopoBounds bounds_;
  bool canonical_;
  std::vector<TopoInput> inputs_;
  std::vector<std::size_t> group_;
  std::vector<std::vector<TopoOutput>> groups_;
  std::uint64_t size_ = 0;
};

}  // namespace bucketeer

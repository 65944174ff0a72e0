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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "bucketeer/bucket.hpp"
#include "bucketeer/decomposition.hpp"
#include "bucketeer/error.hpp"
#include "bucketeer/problem.hpp"

namespace bucketeer {

enum class Engine { random, exhaustive };

inline std::string_view to_string(Engine e) noexcept {
  return e == Engine::random ? "random" : "exhaustive";
}

inline Engine parse_engine(std::string_view s) {
  if (s == "random") return Engine::random;
  if (s == "exhaustive") return Engine::exhaustive;
  throw InputError("unknown engine '" + std::string(s) + "'");
}

// A bucket-labeled set of pairs, every one of which satisfies the bucket.
template <class P>
struct Suite {
  std::string problem{P::name};
  Bucket bucket;
  Engine engine = Engine::random;
  std::uint64_t seed = 0;
  std::vector<Case<P>> tests;
};

// Outcome of searching one bucket exhaustively within bounds.
template <class P>
struct Certificate {
  Bucket bucket;
  typename P::Bounds bounds;
  std::optional<Case<P>> witness;
  std::uint64_t pairs_enumerated = 0;

  bool empty_within_bounds() const noexcept { return !witness.has_value(); }
};

template <class P>
Json suite_to_json(const Suite<P>& suite, const Decomposition& decomp) {
  Json j;
  j["problem"] = suite.problem;
  j["engine"] = to_string(suite.engine);
  j["seed"] = suite.seed;
  j["bucket"] = decomp.bucket_json(suite.bucket);
  Json tests = Json::array();
  for (const auto& t : suite.tests) tests.push_back(encode_case<P>(t));
  j["tests"] = std::move(tests);
  return j;
}

template <class P>
Suite<P> suite_from_json(const Json& j, const Decomposition& decomp) {
  try {
    Suite<P> s;
    s.problem = j.at("problem").get<std::string>();
    if (s.problem != P::name) {
      throw InputError("suite is for '" + s.problem + "'");
    }
    s.engine = parse_engine(j.at("engine").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    s.bucket = decomp.bucket_from_json(j.at("bucket"));
    for (const auto& t : j.at("tests")) s.tests.push_back(decode_case<P>(t));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed suite: ") + e.what());
  }
}

template <class P>
Json certificate_to_json(const Certificate<P>& c) {
  Json j;
  j["bucket"] = c.bucket.id();
  j["bounds"] = encode_bounds<P>(c.bounds);
  j["verdict"] = c.empty_within_bounds() ? "empty_within_bounds" : "nonempty";
  if (c.witness) j["witness"] = encode_case<P>(*c.witness);
  j["pairs_enumerated"] = c.pairs_enumerated;
  return j;
}

template <class P>
Certificate<P> certificate_from_json(const Json& j) {
  try {
    Certificate<P> c;
    c.bucket = Bucket::from_id(j.at("bucket").get<std::string>());
    c.bounds = decode_bounds<P>(j.at("bounds"));
    const auto verdict = j.at("verdict").get<std::string>();
    if (verdict == "nonempty") {
      c.witness = decode_case<P>(j.at("witness"));
    } else if (verdict != "empty_within_bounds") {
      throw InputError("unknown verdict '" + verdict + "'");
    }
    c.pairs_enumerated = j.at("pairs_enumerated").get<std::uint64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
}

// Writes through a sibling temporary and renames it into place, so readers
// never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path,
                              std::string_view contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::system_error(errno, std::generic_category(), tmp.string());
  }
  fs::rename(tmp, path);
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace bucketeer

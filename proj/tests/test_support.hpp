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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "bucketeer/bucketeer.hpp"

namespace bucketeer::testing {

// Toposortacle restricted to the four element/order subproperties plus the
// length check, with the single clause linking them.
inline Decomposition five_property_topo() {
  return Decomposition::parse(R"({
    "problem": "toposortacle",
    "subproperties": [
      {"name": "NO-NEW", "kind": "core"},
      {"name": "NONE-DROPPED", "kind": "core"},
      {"name": "UNIQUENESS", "kind": "core"},
      {"name": "SORTEDNESS", "kind": "core"},
      {"name": "SAME-NUM-VERTICES", "kind": "error"}
    ],
    "implications": [
      {"if": ["NO-NEW", "NONE-DROPPED", "UNIQUENESS"], "then": "SAME-NUM-VERTICES"}
    ]
  })");
}

inline Case<Toposortacle> topo_case(std::vector<Edge> edges, std::vector<Vertex> out) {
  return {TopoInput{std::move(edges)}, TopoOutput{std::move(out)}};
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 gen(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("bucketeer-test-" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

// Runs a shell command, capturing stdout and stderr together.
inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) result.output += buf.data();
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& variant) {
  return std::string(BUCKETEER_FIXTURE) + " " + variant;
}

}  // namespace bucketeer::testing

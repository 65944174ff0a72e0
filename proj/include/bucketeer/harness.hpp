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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>
#include <wordexp.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstddef>
#include <cstring>
#include <map>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "bucketeer/bucket.hpp"
#include "bucketeer/decomposition.hpp"
#include "bucketeer/error.hpp"
#include "bucketeer/problem.hpp"
#include "bucketeer/suite.hpp"

extern char** environ;

namespace bucketeer {

// The predicate command could not be started at all. Distinct from a
// per-test error, which only marks one verdict.
class LaunchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PredicateUnderTest {
  std::string id;
  std::string command;
  std::chrono::milliseconds timeout{5000};
};

enum class Outcome { accepted, rejected, crash, timeout, garbled };

inline bool is_error(Outcome o) noexcept {
  return o == Outcome::crash || o == Outcome::timeout || o == Outcome::garbled;
}

inline std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::accepted: return "accepted";
    case Outcome::rejected: return "rejected";
    case Outcome::crash: return "error:crash";
    case Outcome::timeout: return "error:timeout";
    case Outcome::garbled: return "error:garbled";
  }
  return "error:garbled";
}

inline Outcome parse_outcome(std::string_view s) {
  for (Outcome o : {Outcome::accepted, Outcome::rejected, Outcome::crash,
                    Outcome::timeout, Outcome::garbled}) {
    if (to_string(o) == s) return o;
  }
  throw InputError("unknown verdict '" + std::string(s) + "'");
}

inline std::vector<std::string> split_command(const std::string& command) {
  wordexp_t words;
  if (wordexp(command.c_str(), &words, WRDE_NOCMD) != 0) {
    throw LaunchError("cannot parse predicate command: " + command);
  }
  std::vector<std::string> argv(words.we_wordv, words.we_wordv + words.we_wordc);
  wordfree(&words);
  if (argv.empty()) throw LaunchError("empty predicate command");
  return argv;
}

// One running predicate process speaking the line protocol: a JSON object per
// line in, "true" or "false" per line out.
class PredicateProcess {
 public:
  explicit PredicateProcess(const std::vector<std::string>& argv) {
    static const bool sigpipe_ignored = [] {
      ::signal(SIGPIPE, SIG_IGN);
      return true;
    }();
    (void)sigpipe_ignored;

    int in[2], out[2];
    if (::pipe2(in, O_CLOEXEC) != 0) throw LaunchError(std::strerror(errno));
    if (::pipe2(out, O_CLOEXEC) != 0) {
      ::close(in[0]);
      ::close(in[1]);
      throw LaunchError(std::strerror(errno));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out[1], STDOUT_FILENO);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null",
                                     O_WRONLY, 0);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    const int rc = ::posix_spawnp(&pid_, args[0], &actions, nullptr,
                                  args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(in[0]);
    ::close(out[1]);
    if (rc != 0) {
      ::close(in[1]);
      ::close(out[0]);
      pid_ = -1;
      throw LaunchError("cannot launch '" + argv[0] + "': " + std::strerror(rc));
    }
    to_child_ = in[1];
    from_child_ = out[0];
  }

  PredicateProcess(const PredicateProcess&) = delete;
  PredicateProcess& operator=(const PredicateProcess&) = delete;

  ~PredicateProcess() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
  }

  Outcome ask(std::string_view line, std::chrono::milliseconds timeout) {
    std::string msg(line);
    msg.push_back('\n');
    const char* p = msg.data();
    std::size_t left = msg.size();
    while (left > 0) {
      const ssize_t n = ::write(to_child_, p, left);
      if (n < 0) {
        if (errno == EINTR) continue;
        return Outcome::crash;
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }

    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        const std::string reply = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (reply == "true") return Outcome::accepted;
        if (reply == "false") return Outcome::rejected;
        return Outcome::garbled;
      }
      const auto now = std::chrono::steady_clock::now();
      if (now >= deadline) return Outcome::timeout;
      const auto wait =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
      pollfd fd{from_child_, POLLIN, 0};
      const int ready = ::poll(&fd, 1, static_cast<int>(wait.count()) + 1);
      if (ready < 0) {
        if (errno == EINTR) continue;
        return Outcome::crash;
      }
      if (ready == 0) continue;
      char chunk[4096];
      const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        return Outcome::crash;
      }
      if (n == 0) return Outcome::crash;  // exited before answering
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// A suite in wire form: each test is already a compact JSON line.
struct EncodedSuite {
  std::string label;  // canonical bucket id, or FUNCTIONAL / RELATIONAL
  Polarity polarity = Polarity::negative;
  std::vector<std::string> lines;
};

// Works on any suite file without knowing the problem: the tests are passed
// through as they are stored.
inline EncodedSuite encode_suite_json(const Json& suite,
                                      std::optional<std::string> label = {}) {
  EncodedSuite out;
  const auto& bucket = suite.at("bucket");
  std::string id;
  bool all_true = true;
  for (auto it = bucket.begin(); it != bucket.end(); ++it) {
    const bool v = it.value().get<bool>();
    id.push_back(v ? 'T' : 'F');
    all_true = all_true && v;
  }
  out.label = label ? *label : id;
  out.polarity = all_true ? Polarity::positive : Polarity::negative;
  for (const auto& t : suite.at("tests")) out.lines.push_back(t.dump());
  return out;
}

template <class P>
EncodedSuite encode_suite(const Suite<P>& suite,
                          std::optional<std::string> label = {}) {
  EncodedSuite out;
  out.label = label ? *label : suite.bucket.id();
  out.polarity = classify_bucket(suite.bucket);
  for (const auto& t : suite.tests) out.lines.push_back(encode_case<P>(t).dump());
  return out;
}

struct SuiteResult {
  std::string predicate;
  std::string label;
  Polarity polarity = Polarity::negative;
  std::vector<Outcome> verdicts;  // one per test, in suite order
  bool misclassified = false;
};

// Errors never count as a correct classification.
inline bool misclassifies(Polarity polarity, std::span<const Outcome> verdicts) {
  const Outcome wrong =
      polarity == Polarity::negative ? Outcome::accepted : Outcome::rejected;
  return std::any_of(verdicts.begin(), verdicts.end(), [&](Outcome o) {
    return o == wrong || is_error(o);
  });
}

// Runs every test through one process, restarting it after any error so the
// remaining tests still get an answer.
inline SuiteResult run_suite(const PredicateUnderTest& pred,
                             const EncodedSuite& suite) {
  const auto argv = split_command(pred.command);
  SuiteResult result{pred.id, suite.label, suite.polarity, {}, false};
  std::unique_ptr<PredicateProcess> proc;
  for (const auto& line : suite.lines) {
    if (!proc) proc = std::make_unique<PredicateProcess>(argv);
    const Outcome o = proc->ask(line, pred.timeout);
    result.verdicts.push_back(o);
    if (is_error(o)) proc.reset();
  }
  result.misclassified = misclassifies(result.polarity, result.verdicts);
  return result;
}

// Runs one predicate over many suites; `jobs` suites run at once, each in its
// own process. Results come back in suite order.
inline std::vector<SuiteResult> run_suites(const PredicateUnderTest& pred,
                                           std::span<const EncodedSuite> suites,
                                           std::size_t jobs = 1) {
  std::vector<SuiteResult> results(suites.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < suites.size(); i = next++) {
      try {
        results[i] = run_suite(pred, suites[i]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = suites.size();
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, suites.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

struct FilterReport {
  std::vector<std::string> kept;
  // predicate id -> gates it failed ("FUNCTIONAL", "ALL")
  std::map<std::string, std::vector<std::string>> excluded;
};

// Drops predicates that misclassify the positive FUNCTIONAL suite or the
// negative all-false suite.
inline FilterReport filter_predicates(std::span<const PredicateUnderTest> preds,
                                      const EncodedSuite& functional,
                                      const EncodedSuite& all_false) {
  FilterReport report;
  for (const auto& pred : preds) {
    std::vector<std::string> gates;
    if (run_suite(pred, functional).misclassified) gates.push_back("FUNCTIONAL");
    if (run_suite(pred, all_false).misclassified) gates.push_back("ALL");
    if (gates.empty()) {
      report.kept.push_back(pred.id);
    } else {
      report.excluded[pred.id] = std::move(gates);
    }
  }
  return report;
}

struct Fingerprint {
  std::string predicate;
  std::set<std::string> failed_buckets;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

inline Fingerprint fingerprint(std::string_view predicate,
                               std::span<const SuiteResult> results) {
  Fingerprint fp{std::string(predicate), {}};
  for (const auto& r : results) {
    if (r.predicate == predicate && r.misclassified) fp.failed_buckets.insert(r.label);
  }
  return fp;
}

inline Json fingerprint_to_json(const Fingerprint& fp) {
  Json j;
  j["predicate"] = fp.predicate;
  j["failed_buckets"] = Json::array();
  for (const auto& b : fp.failed_buckets) j["failed_buckets"].push_back(b);
  return j;
}

inline Fingerprint fingerprint_from_json(const Json& j) {
  Fingerprint fp;
  fp.predicate = j.at("predicate").get<std::string>();
  for (const auto& b : j.at("failed_buckets")) fp.failed_buckets.insert(b.get<std::string>());
  return fp;
}

inline Json results_to_json(std::string_view predicate, std::string_view command,
                            std::span<const SuiteResult> results) {
  Json j;
  j["predicate"] = predicate;
  j["command"] = command;
  Json list = Json::array();
  for (const auto& r : results) {
    Json o;
    o["suite"] = r.label;
    o["polarity"] = r.polarity == Polarity::positive ? "positive" : "negative";
    o["misclassified"] = r.misclassified;
    Json v = Json::array();
    for (Outcome x : r.verdicts) v.push_back(to_string(x));
    o["verdicts"] = std::move(v);
    list.push_back(std::move(o));
  }
  j["results"] = std::move(list);
  return j;
}

inline std::vector<SuiteResult> results_from_json(const Json& j) {
  std::vector<SuiteResult> out;
  const auto predicate = j.at("predicate").get<std::string>();
  for (const auto& o : j.at("results")) {
    SuiteResult r;
    r.predicate = predicate;
    r.label = o.at("suite").get<std::string>();
    r.polarity = o.at("polarity").get<std::string>() == "positive"
                     ? Polarity::positive
                     : Polarity::negative;
    for (const auto& v : o.at("verdicts")) {
      r.verdicts.push_back(parse_outcome(v.get<std::string>()));
    }
    r.misclassified = misclassifies(r.polarity, r.verdicts);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bucketeer

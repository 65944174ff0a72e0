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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "bucketeer/bucket.hpp"
#include "bucketeer/decomposition.hpp"
#include "bucketeer/error.hpp"
#include "bucketeer/problem.hpp"
#include "bucketeer/suite.hpp"

namespace bucketeer {

struct EnumerationOptions {
  bool canonical = true;
  std::uint64_t ceiling = 50'000'000;
};

// Builds the bounded pair space, refusing when it holds more than
// `opts.ceiling` pairs. The pre-check on the combinatorial estimate only
// guards against materializing absurdly large input lists; below it the
// refusal reports the exact size.
template <class P>
std::shared_ptr<const typename P::Space> make_space(
    const typename P::Bounds& bounds, const EnumerationOptions& opts) {
  const double estimate = P::Space::estimate(bounds);
  const double guard = std::max(static_cast<double>(opts.ceiling) * 1000.0, 1e9);
  if (estimate > guard) {
    throw BoundsError(estimate >= 1.8e19 ? ~0ULL
                                         : static_cast<std::uint64_t>(estimate),
                      opts.ceiling);
  }
  auto space = std::make_shared<const typename P::Space>(bounds, opts.canonical);
  if (space->size() > opts.ceiling) {
    throw BoundsError(space->size(), opts.ceiling);
  }
  return space;
}

// Stream over every pair of a space exactly once, in the space's documented
// order: input-major, then outputs of that input.
template <class P>
class Cursor {
 public:
  explicit Cursor(std::shared_ptr<const typename P::Space> space)
      : space_(std::move(space)) {}

  // Moves to the next pair; false once the space is exhausted.
  bool next() {
    const auto& inputs = space_->inputs();
    if (started_) {
      ++out_;
    } else {
      started_ = true;
    }
    while (in_ < inputs.size() && out_ >= space_->outputs_for(in_).size()) {
      ++in_;
      out_ = 0;
    }
    if (in_ >= inputs.size()) return false;
    ++visited_;
    return true;
  }

  const typename P::Input& input() const { return space_->inputs()[in_]; }
  const typename P::Output& output() const {
    return space_->outputs_for(in_)[out_];
  }
  Case<P> current() const { return {input(), output()}; }

  std::uint64_t visited() const noexcept { return visited_; }
  const typename P::Space& space() const noexcept { return *space_; }

 private:
  std::shared_ptr<const typename P::Space> space_;
  std::size_t in_ = 0;
  std::size_t out_ = 0;
  bool started_ = false;
  std::uint64_t visited_ = 0;
};

template <class P>
Cursor<P> canonical_enumeration(const typename P::Bounds& bounds,
                                const EnumerationOptions& opts = {}) {
  return Cursor<P>(make_space<P>(bounds, opts));
}

// Resumable search for pairs satisfying one bucket. Successive calls to
// next() continue where the previous call stopped.
template <class P>
class BucketSearch {
 public:
  BucketSearch(const BucketChecker<P>& checker, Bucket bucket,
               const typename P::Bounds& bounds,
               const EnumerationOptions& opts = {})
      : checker_(&checker),
        bucket_(bucket),
        bounds_(bounds),
        cursor_(make_space<P>(bounds, opts)) {}

  std::vector<Case<P>> next(std::size_t k) {
    std::vector<Case<P>> found;
    while (found.size() < k && !exhausted_) {
      if (!cursor_.next()) {
        exhausted_ = true;
        break;
      }
      if (checker_->evaluate_unchecked(cursor_.input(), cursor_.output()) ==
          bucket_) {
        found.push_back(cursor_.current());
      }
    }
    return found;
  }

  bool exhausted() const noexcept { return exhausted_; }
  std::uint64_t pairs_enumerated() const noexcept { return cursor_.visited(); }
  const Bucket& bucket() const noexcept { return bucket_; }

 private:
  const BucketChecker<P>* checker_;
  Bucket bucket_;
  typename P::Bounds bounds_;
  Cursor<P> cursor_;
  bool exhausted_ = false;
};

// First k satisfying pairs in enumeration order, or a certificate that the
// bucket has none within bounds.
template <class P>
std::variant<Suite<P>, Certificate<P>> enumerate_bucket(
    const BucketChecker<P>& checker, const Bucket& bucket,
    const typename P::Bounds& bounds, std::size_t k,
    const EnumerationOptions& opts = {}) {
  if (k == 0) throw InputError("k must be at least 1");
  BucketSearch<P> search(checker, bucket, bounds, opts);
  auto tests = search.next(k);
  if (tests.empty()) {
    return Certificate<P>{bucket, bounds, std::nullopt,
                          search.pairs_enumerated()};
  }
  Suite<P> suite;
  suite.bucket = bucket;
  suite.engine = Engine::exhaustive;
  suite.tests = std::move(tests);
  return suite;
}

template <class P>
struct ImplicationCheck {
  std::optional<Case<P>> counterexample;
  std::uint64_t pairs_enumerated = 0;

  bool holds_within_bounds() const noexcept { return !counterexample; }
};

// Looks for a pair meeting every antecedent while failing the consequent.
template <class P>
ImplicationCheck<P> check_implication(const BucketChecker<P>& checker,
                                      const Implication& candidate,
                                      const typename P::Bounds& bounds,
                                      const EnumerationOptions& opts = {}) {
  Cursor<P> cursor(make_space<P>(bounds, opts));
  while (cursor.next()) {
    const Bucket b = checker.evaluate_unchecked(cursor.input(), cursor.output());
    if (candidate.violated_by(b)) return {cursor.current(), cursor.visited()};
  }
  return {std::nullopt, cursor.visited()};
}

// One pass over the space, classifying every pair. Yields a certificate for
// each bucket of the power set, in canonical order. A nonempty certificate
// records how many pairs were visited up to its first witness, matching a
// per-bucket search with k = 1.
template <class P>
std::vector<Certificate<P>> prove_all(const BucketChecker<P>& checker,
                                      const typename P::Bounds& bounds,
                                      const EnumerationOptions& opts = {}) {
  struct First {
    Case<P> witness;
    std::uint64_t position;
  };
  std::unordered_map<std::uint64_t, First> first;
  Cursor<P> cursor(make_space<P>(bounds, opts));
  const std::size_t width = checker.size();
  const std::size_t total = std::size_t{1} << width;
  while (cursor.next()) {
    const Bucket b = checker.evaluate_unchecked(cursor.input(), cursor.output());
    if (!first.count(b.truth())) {
      first.emplace(b.truth(), First{cursor.current(), cursor.visited()});
      if (first.size() == total) {
        // Every bucket is witnessed; nothing left to prove empty.
        break;
      }
    }
  }
  const std::uint64_t space_size = cursor.space().size();
  std::vector<Certificate<P>> out;
  for (const auto& bucket : enumerate_power_set(checker.decomposition())) {
    auto it = first.find(bucket.truth());
    if (it == first.end()) {
      out.push_back({bucket, bounds, std::nullopt, space_size});
    } else {
      out.push_back({bucket, bounds, it->second.witness, it->second.position});
    }
  }
  return out;
}

// One pass collecting the first k pairs of each requested bucket.
template <class P>
std::vector<std::pair<Bucket, std::vector<Case<P>>>> enumerate_all(
    const BucketChecker<P>& checker, std::span<const Bucket> buckets,
    const typename P::Bounds& bounds, std::size_t k,
    const EnumerationOptions& opts = {}) {
  std::unordered_map<std::uint64_t, std::vector<Case<P>>> found;
  for (const auto& b : buckets) found[b.truth()];
  std::size_t open = buckets.size();
  Cursor<P> cursor(make_space<P>(bounds, opts));
  while (open > 0 && cursor.next()) {
    const Bucket b = checker.evaluate_unchecked(cursor.input(), cursor.output());
    auto it = found.find(b.truth());
    if (it == found.end() || it->second.size() >= k) continue;
    it->second.push_back(cursor.current());
    if (it->second.size() == k) --open;
  }
  std::vector<std::pair<Bucket, std::vector<Case<P>>>> out;
  for (const auto& b : buckets) out.emplace_back(b, std::move(found[b.truth()]));
  return out;
}

enum class Arity { exactly_one, more_than_one };

// Pairs whose input has exactly one (or more than one) output within bounds
// satisfying the full property. For more_than_one every valid output of the
// input is emitted.
template <class P>
std::vector<Case<P>> functional_inputs(const BucketChecker<P>& checker,
                                       const typename P::Bounds& bounds,
                                       Arity arity,
                                       const EnumerationOptions& opts = {}) {
  const auto space = make_space<P>(bounds, opts);
  std::vector<Case<P>> out;
  const auto& inputs = space->inputs();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::vector<const typename P::Output*> valid;
    for (const auto& o : space->outputs_for(i)) {
      if (checker.full_property_unchecked(inputs[i], o)) valid.push_back(&o);
      if (arity == Arity::exactly_one && valid.size() > 1) break;
    }
    const bool keep = arity == Arity::exactly_one ? valid.size() == 1
                                                  : valid.size() > 1;
    if (!keep) continue;
    for (const auto* o : valid) out.push_back({inputs[i], *o});
  }
  return out;
}

}  // namespace bucketeer

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

// bucketeer: generate bucketed test suites, prove buckets empty, and grade
// candidate predicates against the suites.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "bucketeer/bucketeer.hpp"

namespace fs = std::filesystem;
using namespace bucketeer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitNoOutput = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBounds = 65;
constexpr int kExitMissing = 66;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string problem;
  std::string manifest;
  std::string engine = "random";
  std::string buckets = "power";
  std::string bounds;
  std::string out = "workspace";
  std::string cache;
  std::string predicate;
  std::string id;
  std::string antecedents;
  std::string consequent;
  std::string results_a;
  std::string results_b;
  std::uint64_t seed = 0;
  std::size_t suite_size = 10;
  std::size_t budget = 20000;
  std::size_t jobs = 1;
  std::size_t timeout_ms = 5000;
  std::uint64_t ceiling = 50'000'000;
  bool positive = false;
  bool no_canonical = false;
};

template <class F>
int dispatch(const std::string& problem, F&& f) {
  if (problem == "toposortacle" || problem == "topo") {
    return f.template operator()<Toposortacle>();
  }
  if (problem == "sortacle" || problem == "sort") {
    return f.template operator()<Sortacle>();
  }
  if (problem == "matcher" || problem == "match") {
    return f.template operator()<Matcher>();
  }
  throw UsageError("unknown problem '" + problem +
                   "' (expected toposortacle, sortacle or matcher)");
}

// A manifest is a built-in name or a path to a JSON file.
Json load_manifest_json(const std::string& manifest, std::string_view problem) {
  const std::string name = manifest.empty() ? std::string(problem) : manifest;
  const auto& table = manifests::builtin();
  if (auto it = table.find(name); it != table.end()) {
    return Json::parse(it->second);
  }
  if (!fs::exists(name)) throw MissingInput("no manifest at " + name);
  return read_json(name);
}

template <class P>
struct Context {
  Json manifest;
  Decomposition decomp;
  typename P::Bounds bounds;
  EnumerationOptions enumeration;
  fs::path root;
};

template <class P>
Context<P> make_context(const Options& opt) {
  Json manifest = load_manifest_json(opt.manifest, P::name);
  Decomposition decomp = Decomposition::from_json(manifest);
  typename P::Bounds bounds{};
  if (manifest.contains("bounds")) {
    const auto& section = manifest["bounds"];
    for (const auto& [key, field] : P::bound_fields) {
      if (section.contains(std::string(key))) {
        bounds.*field = section[std::string(key)].template get<std::size_t>();
      }
    }
  }
  bounds = parse_bounds<P>(opt.bounds, bounds);
  EnumerationOptions enumeration{!opt.no_canonical, opt.ceiling};
  return {std::move(manifest), std::move(decomp), bounds, enumeration, opt.out};
}

fs::path suites_dir(const fs::path& root, std::string_view problem,
                    std::string_view engine) {
  return root / "suites" / std::string(problem) / std::string(engine);
}
fs::path positive_dir(const fs::path& root, std::string_view problem) {
  return root / "suites" / std::string(problem) / "positive";
}
fs::path certificates_dir(const fs::path& root, std::string_view problem) {
  return root / "certificates" / std::string(problem);
}
fs::path results_dir(const fs::path& root, std::string_view problem,
                     std::string_view engine) {
  return root / "results" / std::string(problem) / std::string(engine);
}
fs::path fingerprints_dir(const fs::path& root, std::string_view problem,
                          std::string_view engine) {
  return root / "fingerprints" / std::string(problem) / std::string(engine);
}
fs::path reports_dir(const fs::path& root, std::string_view problem) {
  return root / "reports" / std::string(problem);
}

// JSON files of a directory, sorted by name.
std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json id_list(const std::vector<Bucket>& buckets) {
  Json j = Json::array();
  for (const auto& b : buckets) j.push_back(b.id());
  return j;
}

template <class P>
int gen_positive(const Context<P>& ctx, const BucketChecker<P>& checker,
                 const Options& opt) {
  int written = 0;
  for (auto [arity, name] : {std::pair{Arity::exactly_one, "functional"},
                             std::pair{Arity::more_than_one, "relational"}}) {
    auto cases = functional_inputs(checker, ctx.bounds, arity, ctx.enumeration);
    if (cases.size() > opt.suite_size) cases.resize(opt.suite_size);
    if (cases.empty()) {
      std::cout << "positive " << name << ": no pairs within bounds\n";
      continue;
    }
    Suite<P> suite;
    suite.bucket = Bucket::all_true(ctx.decomp.size());
    suite.engine = Engine::exhaustive;
    suite.tests = std::move(cases);
    write_json(positive_dir(ctx.root, P::name) / (std::string(name) + ".json"),
               suite_to_json(suite, ctx.decomp));
    std::cout << "positive " << name << ": " << suite.tests.size() << " tests\n";
    ++written;
  }
  return written;
}

template <class P>
int cmd_gen(const Options& opt) {
  const auto ctx = make_context<P>(opt);
  const BucketChecker<P> checker(ctx.decomp);
  const auto selection = BucketSelection::parse(opt.buckets);
  const Engine engine = parse_engine(opt.engine);
  const auto dir = suites_dir(ctx.root, P::name, to_string(engine));
  std::size_t written = 0;
  Json summary;
  summary["problem"] = P::name;
  summary["engine"] = to_string(engine);
  summary["buckets"] = opt.buckets;

  if (engine == Engine::random) {
    GenConfig<P> config;
    config.global_seed = opt.seed;
    config.suite_size = opt.suite_size;
    config.candidate_budget = opt.budget;
    const fs::path cache_path =
        opt.cache.empty() ? ctx.root / "cache.json" : fs::path(opt.cache);
    InfeasibilityCache cache(cache_path);
    const auto report = generate_all(checker, config, selection, &cache, opt.jobs);
    for (const auto& suite : report.suites) {
      write_json(dir / (suite.bucket.id() + ".json"), suite_to_json(suite, ctx.decomp));
      ++written;
    }
    summary["seed"] = opt.seed;
    summary["concretized"] = id_list(report.concretized);
    summary["exhausted"] = id_list(report.exhausted);
    summary["skipped_by_cache"] = id_list(report.skipped_by_cache);
    summary["candidates_drawn"] = report.candidates_drawn;
    std::cout << "concretized " << report.concretized.size() << ", exhausted "
              << report.exhausted.size() << ", skipped by cache "
              << report.skipped_by_cache.size() << ", candidates drawn "
              << report.candidates_drawn << "\n";
  } else {
    const auto buckets = select_buckets(ctx.decomp, selection);
    const auto found = enumerate_all(checker, buckets, ctx.bounds, opt.suite_size,
                                     ctx.enumeration);
    std::vector<Bucket> concretized, empty, short_suites;
    std::uint64_t space_size = 0;
    for (const auto& [bucket, cases] : found) {
      if (cases.empty()) {
        if (space_size == 0) {
          space_size = make_space<P>(ctx.bounds, ctx.enumeration)->size();
        }
        const Certificate<P> cert{bucket, ctx.bounds, std::nullopt, space_size};
        write_json(certificates_dir(ctx.root, P::name) / (bucket.id() + ".json"),
                   certificate_to_json(cert));
        empty.push_back(bucket);
        continue;
      }
      Suite<P> suite;
      suite.bucket = bucket;
      suite.engine = Engine::exhaustive;
      suite.tests = cases;
      write_json(dir / (bucket.id() + ".json"), suite_to_json(suite, ctx.decomp));
      concretized.push_back(bucket);
      if (cases.size() < opt.suite_size) short_suites.push_back(bucket);
      ++written;
    }
    summary["bounds"] = encode_bounds<P>(ctx.bounds);
    summary["concretized"] = id_list(concretized);
    summary["empty_within_bounds"] = id_list(empty);
    summary["short"] = id_list(short_suites);
    std::cout << "concretized " << concretized.size() << ", empty within bounds "
              << empty.size() << ", fewer than " << opt.suite_size
              << " pairs " << short_suites.size() << "\n";
  }
  write_json(reports_dir(ctx.root, P::name) / ("gen-" + std::string(to_string(engine)) + ".json"),
             summary);
  if (opt.positive) written += static_cast<std::size_t>(gen_positive(ctx, checker, opt));
  if (written == 0) {
    std::cerr << "warning: no suites written\n";
    return kExitNoOutput;
  }
  return kExitOk;
}

template <class P>
int cmd_prove(const Options& opt) {
  const auto ctx = make_context<P>(opt);
  const BucketChecker<P> checker(ctx.decomp);
  const auto certs = prove_all(checker, ctx.bounds, ctx.enumeration);
  const auto space_size = make_space<P>(ctx.bounds, ctx.enumeration)->size();
  std::vector<Bucket> nonempty, empty;
  for (const auto& c : certs) {
    write_json(certificates_dir(ctx.root, P::name) / (c.bucket.id() + ".json"),
               certificate_to_json(c));
    (c.empty_within_bounds() ? empty : nonempty).push_back(c.bucket);
  }
  Json summary;
  summary["problem"] = P::name;
  summary["bounds"] = encode_bounds<P>(ctx.bounds);
  summary["canonical"] = ctx.enumeration.canonical;
  summary["space_size"] = space_size;
  summary["concretizable"] = id_list(nonempty);
  summary["empty_within_bounds"] = id_list(empty);
  write_json(reports_dir(ctx.root, P::name) / "prove.json", summary);
  std::cout << nonempty.size() << " of " << certs.size()
            << " buckets concretizable within bounds " << encode_bounds<P>(ctx.bounds).dump()
            << " (" << space_size << " pairs)\n";
  return kExitOk;
}

// Bucket suites of one engine plus any positive suites, in a fixed order.
std::vector<EncodedSuite> load_encoded_suites(const fs::path& root,
                                              std::string_view problem,
                                              std::string_view engine) {
  std::vector<EncodedSuite> suites;
  for (const auto& f : json_files(suites_dir(root, problem, engine))) {
    suites.push_back(encode_suite_json(read_json(f)));
  }
  for (const auto& f : json_files(positive_dir(root, problem))) {
    suites.push_back(encode_suite_json(read_json(f), upper(f.stem().string())));
  }
  return suites;
}

template <class P>
int cmd_run(const Options& opt) {
  const auto ctx = make_context<P>(opt);
  if (opt.predicate.empty()) throw UsageError("run needs --predicate");
  const std::string engine(to_string(parse_engine(opt.engine)));
  const auto suites = load_encoded_suites(ctx.root, P::name, engine);
  if (suites.empty()) {
    throw MissingInput("no suites under " + suites_dir(ctx.root, P::name, engine).string());
  }
  PredicateUnderTest pred{opt.id.empty() ? fs::path(split_command(opt.predicate)[0]).filename().string()
                                         : opt.id,
                          opt.predicate, std::chrono::milliseconds(opt.timeout_ms)};
  const auto results = run_suites(pred, suites, opt.jobs);

  // The positive FUNCTIONAL suite and the all-false bucket gate the predicate.
  const std::string all_false = Bucket::all_false(ctx.decomp.size()).id();
  std::vector<std::string> gates;
  bool have_functional = false, have_all = false;
  for (const auto& r : results) {
    if (r.label == kFunctional) {
      have_functional = true;
      if (r.misclassified) gates.push_back(std::string(kFunctional));
    }
    if (r.label == all_false) {
      have_all = true;
      if (r.misclassified) gates.push_back("ALL");
    }
  }
  Json j = results_to_json(pred.id, pred.command, results);
  if (have_functional && have_all) j["failed_gates"] = gates;
  write_json(results_dir(ctx.root, P::name, engine) / (pred.id + ".json"), j);
  const auto fp = fingerprint(pred.id, results);
  write_json(fingerprints_dir(ctx.root, P::name, engine) / (pred.id + ".json"),
             fingerprint_to_json(fp));
  std::cout << pred.id << ": fails " << fp.failed_buckets.size() << " of "
            << results.size() << " suites";
  if (!gates.empty()) {
    std::cout << " (excluded by";
    for (const auto& g : gates) std::cout << " " << g;
    std::cout << ")";
  }
  std::cout << "\n";
  return kExitOk;
}

std::vector<SuiteResult> load_results(const fs::path& dir) {
  const auto files = json_files(dir);
  if (files.empty()) throw MissingInput("no results under " + dir.string());
  std::vector<SuiteResult> all;
  for (const auto& f : files) {
    auto r = results_from_json(read_json(f));
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

template <class P>
int cmd_fingerprint(const Options& opt) {
  const auto ctx = make_context<P>(opt);
  const std::string engine(to_string(parse_engine(opt.engine)));
  const auto results = load_results(results_dir(ctx.root, P::name, engine));
  std::vector<Fingerprint> fps;
  for (const auto& id : population(results)) {
    fps.push_back(fingerprint(id, results));
    write_json(fingerprints_dir(ctx.root, P::name, engine) / (id + ".json"),
               fingerprint_to_json(fps.back()));
  }
  const auto clusters = cluster_fingerprints(fps);
  write_json(reports_dir(ctx.root, P::name) / ("fingerprints-" + engine + ".json"),
             clusters_json(clusters));
  std::cout << fps.size() << " predicates, " << clusters.size() << " fingerprints\n";
  for (const auto& c : clusters) {
    std::cout << "  " << c.predicates.size() << " x {";
    bool first = true;
    for (const auto& b : c.failed_buckets) {
      std::cout << (first ? "" : ",") << b;
      first = false;
    }
    std::cout << "}:";
    for (const auto& p : c.predicates) std::cout << " " << p;
    std::cout << "\n";
  }
  return kExitOk;
}

template <class P>
int cmd_compare(const Options& opt) {
  const auto ctx = make_context<P>(opt);
  const fs::path dir_a = opt.results_a.empty()
                             ? results_dir(ctx.root, P::name, "random")
                             : fs::path(opt.results_a);
  const fs::path dir_b = opt.results_b.empty()
                             ? results_dir(ctx.root, P::name, "exhaustive")
                             : fs::path(opt.results_b);
  const auto a = load_results(dir_a);
  const auto b = load_results(dir_b);
  std::string name_a = dir_a.filename().string();
  std::string name_b = dir_b.filename().string();
  if (name_a.empty() || name_a == name_b) {
    name_a = "A";
    name_b = "B";
  }
  std::set<std::string> evaluated;
  for (const auto* side : {&a, &b}) {
    for (const auto& r : *side) evaluated.insert(r.label);
  }
  const auto plan = group_buckets(ctx.decomp, evaluated);
  const auto rows = compare(a, b, plan);
  const auto dir = reports_dir(ctx.root, P::name);
  const auto table = comparison_table(rows, name_a, name_b, plan);
  write_file_atomic(dir / "compare.csv", comparison_csv(rows, name_a, name_b));
  write_json(dir / "compare.json", comparison_json(rows, name_a, name_b, plan));
  write_file_atomic(dir / "compare.txt", table);
  std::cout << table;
  return kExitOk;
}

template <class P>
std::vector<Suite<P>> load_suites(const fs::path& dir, const Decomposition& decomp) {
  std::vector<Suite<P>> suites;
  for (const auto& f : json_files(dir)) {
    suites.push_back(suite_from_json<P>(read_json(f), decomp));
  }
  return suites;
}

template <class P>
int cmd_crossval(const Options& opt) {
  const auto ctx = make_context<P>(opt);
  const BucketChecker<P> checker(ctx.decomp);
  const auto random = load_suites<P>(suites_dir(ctx.root, P::name, "random"), ctx.decomp);
  const auto exhaustive =
      load_suites<P>(suites_dir(ctx.root, P::name, "exhaustive"), ctx.decomp);
  std::vector<Certificate<P>> certs;
  for (const auto& f : json_files(certificates_dir(ctx.root, P::name))) {
    certs.push_back(certificate_from_json<P>(read_json(f)));
  }
  if (random.empty() && exhaustive.empty()) {
    throw MissingInput("no suites under " + (ctx.root / "suites" / std::string(P::name)).string());
  }
  const auto cv = cross_validate<P>(checker, random, exhaustive, certs);
  write_json(reports_dir(ctx.root, P::name) / "crossval.json", cross_validation_json(cv));
  std::size_t tests = 0;
  for (const auto& s : random) tests += s.tests.size();
  for (const auto& s : exhaustive) tests += s.tests.size();
  std::cout << "re-evaluated " << tests << " tests: " << cv.mislabeled.size()
            << " mislabeled, " << cv.contradicted.size()
            << " contradict an emptiness certificate, " << cv.warnings.size()
            << " warnings\n";
  for (const auto& w : cv.warnings) std::cout << "  warning: " << w << "\n";
  return cv.clean() ? kExitOk : kExitFailed;
}

template <class P>
int cmd_implies(const Options& opt) {
  const auto ctx = make_context<P>(opt);
  const BucketChecker<P> checker(ctx.decomp);
  const auto antecedents = split_list(opt.antecedents);
  if (antecedents.empty() || opt.consequent.empty()) {
    throw UsageError("implies needs --if and --then");
  }
  const auto candidate = ctx.decomp.implication(antecedents, opt.consequent);
  const auto result = check_implication(checker, candidate, ctx.bounds, ctx.enumeration);
  Json j;
  j["implication"] = ctx.decomp.implication_json(candidate);
  j["bounds"] = encode_bounds<P>(ctx.bounds);
  j["holds_within_bounds"] = result.holds_within_bounds();
  if (result.counterexample) j["counterexample"] = encode_case<P>(*result.counterexample);
  j["pairs_enumerated"] = result.pairs_enumerated;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bucketed test-suite generation and predicate grading"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--problem", opt.problem, "toposortacle, sortacle or matcher")
        ->required();
    cmd->add_option("--manifest", opt.manifest,
                    "decomposition manifest: built-in name or JSON file");
    cmd->add_option("--out", opt.out, "workspace root")->capture_default_str();
  };
  auto enumeration = [&](CLI::App* cmd) {
    cmd->add_option("--bounds", opt.bounds, "scope limits as key=value,...");
    cmd->add_option("--ceiling", opt.ceiling, "largest enumeration space allowed")
        ->capture_default_str();
    cmd->add_flag("--no-canonical", opt.no_canonical,
                  "enumerate every labeling instead of canonical forms");
  };

  auto* gen = app.add_subcommand("gen", "generate one suite per bucket");
  common(gen);
  enumeration(gen);
  gen->add_option("--engine", opt.engine, "random or exhaustive")->capture_default_str();
  gen->add_option("--buckets", opt.buckets, "power, pruned or focused:<name>")
      ->capture_default_str();
  gen->add_option("--seed", opt.seed)->capture_default_str();
  gen->add_option("--suite-size", opt.suite_size)->capture_default_str();
  gen->add_option("--budget", opt.budget, "candidates drawn per bucket")
      ->capture_default_str();
  gen->add_option("--jobs", opt.jobs)->capture_default_str();
  gen->add_option("--cache", opt.cache, "infeasibility cache file");
  gen->add_flag("--positive", opt.positive, "also write FUNCTIONAL and RELATIONAL suites");

  auto* prove = app.add_subcommand("prove", "certify every bucket within bounds");
  common(prove);
  enumeration(prove);

  auto* run = app.add_subcommand("run", "run a predicate against the suites");
  common(run);
  run->add_option("--engine", opt.engine)->capture_default_str();
  run->add_option("--predicate", opt.predicate, "predicate command line")->required();
  run->add_option("--id", opt.id, "predicate id");
  run->add_option("--timeout-ms", opt.timeout_ms)->capture_default_str();
  run->add_option("--jobs", opt.jobs)->capture_default_str();

  auto* fp = app.add_subcommand("fingerprint", "cluster predicate fingerprints");
  common(fp);
  fp->add_option("--engine", opt.engine)->capture_default_str();

  auto* cmp = app.add_subcommand("compare", "compare two result directories");
  common(cmp);
  cmp->add_option("--a", opt.results_a, "first results directory");
  cmp->add_option("--b", opt.results_b, "second results directory");

  auto* xval = app.add_subcommand("crossval", "cross-check both engines");
  common(xval);

  auto* implies = app.add_subcommand("implies", "check an implication within bounds");
  common(implies);
  enumeration(implies);
  implies->add_option("--if", opt.antecedents, "antecedents, comma separated")->required();
  implies->add_option("--then", opt.consequent, "consequent")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto with = [&](auto cmd) { return dispatch(opt.problem, cmd); };
    if (*gen) return with([&]<class P>() { return cmd_gen<P>(opt); });
    if (*prove) return with([&]<class P>() { return cmd_prove<P>(opt); });
    if (*run) return with([&]<class P>() { return cmd_run<P>(opt); });
    if (*fp) return with([&]<class P>() { return cmd_fingerprint<P>(opt); });
    if (*cmp) return with([&]<class P>() { return cmd_compare<P>(opt); });
    if (*xval) return with([&]<class P>() { return cmd_crossval<P>(opt); });
    if (*implies) return with([&]<class P>() { return cmd_implies<P>(opt); });
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BoundsError& e) {
    std::cerr << "error: enumeration space of " << e.space_size()
              << " pairs exceeds the ceiling of " << e.ceiling() << "\n";
    return kExitBounds;
  } catch (const MissingInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissing;
  } catch (const LaunchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissing;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

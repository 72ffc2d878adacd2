// Acceptance suite: one PASS/FAIL line per criterion. Run with a criterion
// number to check just that one; the exit status is non-zero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "perturbkit/bench/corpus.h"
#include "perturbkit/bench/filter.h"
#include "perturbkit/bench/tasks.h"
#include "perturbkit/core/catalog.h"
#include "perturbkit/core/error.h"
#include "perturbkit/core/rng.h"
#include "perturbkit/peso/optimizer.h"
#include "perturbkit/similarity/similarity.h"
#include "perturbkit/transform/engine.h"
#include "perturbkit/verify/process.h"
#include "perturbkit/verify/verify.h"
#include "support/oracles.h"
#include "support/programs.h"
#include "support/synthetic.h"
#include "support/test_support.h"

namespace pk {
namespace {

namespace fs = std::filesystem;
using testing::fixture_dir;

// Tolerances and limits.
constexpr double kCombinerTolerance = 0.005;
constexpr double kUniformTolerance = 1e-12;
constexpr double kClosedFormTolerance = 1e-9;
constexpr double kSumTolerance = 1e-9;
constexpr double kRescoreTolerance = 1e-12;
constexpr int kRandomGainVectors = 100000;
constexpr int kMonotoneRuns = 200;
constexpr int kLandscapeSeeds = 400;
constexpr int kPairedSeeds = 30;
constexpr double kLandscapeDelta = 0.1;
constexpr int kTaskPairs = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string name;
  double limit_s;
  std::function<Outcome()> check;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// ---- 1: combiner against the reference similarity table ------------------

// Per row: Python SuS M, R; SeS M, R; SS M, R; then the same six for Go.
struct TableRow {
  int id;
  double v[12];
};

constexpr TableRow kSimilarityTable[] = {
    {1, {0.80, 0.81, 0.73, 0.75, 0.765, 0.78, 0.72, 0.76, 0.82, 0.92, 0.77, 0.84}},
    {2, {0.55, 0.77, 0.27, 0.41, 0.41, 0.59, 0.75, 0.78, 0.95, 0.99, 0.85, 0.885}},
    {3, {0.70, 0.70, 0.78, 0.39, 0.74, 0.545, 0.51, 0.48, 0.78, 0.84, 0.645, 0.660}},
    {4, {0.66, 0.69, 0.69, 0.69, 0.675, 0.69, 0.81, 0.74, 0.94, 0.98, 0.875, 0.86}},
    {5, {0.71, 0.86, 0.91, 0.96, 0.81, 0.91, 0.82, 0.81, 0.89, 0.95, 0.855, 0.88}},
    {6, {0.71, 0.68, 0.37, 0.83, 0.54, 0.755, 0.41, 0.38, 0.56, 0.48, 0.485, 0.43}},
    {7, {0.67, 0.71, 0.53, 0.72, 0.60, 0.715, 0.48, 0.73, 0.32, 0.51, 0.40, 0.62}},
    {8, {0.82, 0.83, 0.83, 0.90, 0.825, 0.865, 0.64, 0.51, 0.87, 0.87, 0.755, 0.69}},
    {9, {0.71, 0.82, 0.53, 0.76, 0.62, 0.79, 0.68, 0.80, 0.81, 0.63, 0.745, 0.865}},
    {10, {0.77, 0.83, 0.71, 0.72, 0.74, 0.775, 0.60, 0.59, 0.82, 0.89, 0.71, 0.74}},
    {11, {0.75, 0.73, 0.75, 0.88, 0.75, 0.805, 0.59, 0.44, 0.84, 0.52, 0.715, 0.48}},
    {12, {0.82, 0.83, 0.96, 0.88, 0.89, 0.855, 0.73, 0.76, 0.94, 0.97, 0.835, 0.865}},
    {13, {0.49, 0.51, 0.60, 0.17, 0.545, 0.34, 0.65, 0.89, 0.75, 0.98, 0.70, 0.935}},
    {14, {0.74, 0.86, 0.77, 0.92, 0.755, 0.89, 0.61, 0.78, 0.80, 0.85, 0.705, 0.815}},
    {15, {0.66, 0.80, 0.66, 0.84, 0.66, 0.82, 0.52, 0.91, 0.83, 0.96, 0.675, 0.935}},
    {16, {0.62, 0.64, 0.48, 0.47, 0.55, 0.555, 0.85, 0.89, 0.91, 0.98, 0.88, 0.935}},
    {17, {0.55, 0.77, 0.00, 0.00, 0.275, 0.385, 0.72, 0.80, 0.96, 0.85, 0.84, 0.825}},
    {18, {0.59, 0.69, 0.24, 0.37, 0.415, 0.53, 0.40, 0.43, 0.52, 0.21, 0.46, 0.32}},
    {19, {0.69, 0.67, 0.45, 0.26, 0.57, 0.465, 0.64, 0.69, 0.43, 0.95, 0.535, 0.85}},
    {20, {0.57, 0.76, 0.27, 0.71, 0.42, 0.735, 0.61, 0.81, 0.80, 0.89, 0.705, 0.85}},
};

Outcome combiner_table() {
  const PesoConfig config;
  int total = 0;
  std::vector<std::string> misses;
  for (const TableRow& row : kSimilarityTable) {
    for (int lang = 0; lang < 2; ++lang) {
      for (int mode = 0; mode < 2; ++mode) {
        const int base = 6 * lang + mode;
        const double got = combined_score(row.v[base], row.v[base + 2], config);
        const double want = row.v[base + 4];
        ++total;
        if (std::abs(got - want) > kCombinerTolerance) {
          misses.push_back(format("%s row %d %s: %.3f vs %.3f", lang ? "Go" : "Python", row.id,
                                  mode ? "R" : "M", got, want));
        }
      }
    }
  }
  std::string detail = format("%d/%d triples within %.3f", total - int(misses.size()), total,
                              kCombinerTolerance);
  for (const auto& m : misses) detail += "; " + m;
  return {misses.empty(), detail};
}

// ---- 2: selection law ------------------------------------------------------

Outcome selection_law() {
  const double temperature = 2.0;
  double worst_uniform = 0;
  for (double p : boltzmann_probabilities(Gains{}, temperature)) {
    worst_uniform = std::max(worst_uniform, std::abs(p - 1.0 / 6.0));
  }
  const Gains one = {0.3, 0, 0, 0, 0, 0};
  const double closed = std::exp(0.15) / (std::exp(0.15) + 5.0);
  const double closed_err = std::abs(boltzmann_probabilities(one, temperature)[0] - closed);
  Rng rng(2024);
  double worst_sum = 0;
  for (int i = 0; i < kRandomGainVectors; ++i) {
    Gains g;
    for (double& x : g) x = rng.uniform_real() * 2.0 - 1.0;
    double sum = 0;
    for (double p : boltzmann_probabilities(g, temperature)) sum += p;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  const bool pass = worst_uniform < kUniformTolerance && closed_err < kClosedFormTolerance &&
                    worst_sum < kSumTolerance;
  return {pass, format("uniform err %.2e, closed-form err %.2e, max sum err %.2e over %d vectors",
                       worst_uniform, closed_err, worst_sum, kRandomGainVectors)};
}

// ---- 3: monotone accepted trace and independent re-scoring -----------------

double rescore(const CodeSample& a, const CodeSample& b, const PesoConfig& config) {
  const double s1 = testing::dp_surface(a.text, b.text);
  const TokenStream ta = tokenize(a);
  const TokenStream tb = tokenize(b);
  const double s2 =
      2.0 *
      static_cast<double>(testing::brute_tiling(ta.tokens, tb.tokens, config.min_tile_len)) /
      static_cast<double>(ta.size() + tb.size());
  return config.mu * s1 + config.nu * s2;
}

Outcome peso_monotone() {
  const testing::MutatingEngine engine;
  const CodeSample original = testing::flat_python_sample();
  int monotone = 0;
  int rescored = 0;
  double worst = 0;
  for (int seed = 0; seed < kMonotoneRuns; ++seed) {
    PesoConfig config;
    config.rng_seed = static_cast<std::uint64_t>(seed);
    const Optimizer opt(engine, build_catalog(), config, testing::hashed_verifier());
    const RunResult r = opt.run(original);
    bool ok = true;
    double last = 1.0;
    for (const IterationRecord& rec : r.trace) {
      if (!rec.accepted) continue;
      if (!rec.score || rec.score->ss > last) ok = false;
      last = rec.score ? rec.score->ss : last;
    }
    monotone += ok ? 1 : 0;
    const double err = std::abs(rescore(original, r.final_sample, config) - r.mss);
    worst = std::max(worst, err);
    rescored += err <= kRescoreTolerance ? 1 : 0;
  }
  return {monotone == kMonotoneRuns && rescored == kMonotoneRuns,
          format("%d/%d runs non-increasing, %d/%d re-scores match (max err %.2e)", monotone,
                 kMonotoneRuns, rescored, kMonotoneRuns, worst)};
}

// ---- 4: termination ---------------------------------------------------------

Outcome termination() {
  // Renames and the six initialization steps leave ss at 1.0.
  const testing::HalvingEngine halving(2 + 6);
  const Optimizer fast(halving, build_catalog(), PesoConfig{}, testing::fixed_verifier(true),
                       testing::text_scorer());
  const RunResult a = fast.run(testing::scored_sample(1.0));
  std::vector<double> path = {1.0};
  int accepted_main = 0;
  for (const IterationRecord& rec : a.trace) {
    if (rec.phase == Phase::kMain && rec.accepted) {
      ++accepted_main;
      path.push_back(rec.mss);
    }
  }
  const bool halving_ok = a.early_stop && accepted_main == 3 && a.main_iterations == 3 &&
                          path == std::vector<double>{1.0, 0.5, 0.25, 0.125};

  const testing::InertEngine inert;
  const Optimizer slow(inert, build_catalog(), PesoConfig{}, testing::fixed_verifier(true),
                       testing::text_scorer());
  const RunResult b = slow.run(testing::scored_sample(1.0));
  int main_records = 0;
  for (const IterationRecord& rec : b.trace) main_records += rec.phase == Phase::kMain ? 1 : 0;
  const bool failing_ok = !b.early_stop && b.main_iterations == 15 && main_records == 15;
  return {halving_ok && failing_ok,
          format("halving: stop=%d after %d accepted steps, mss %.3f; failing: %d iterations",
                 int(a.early_stop), accepted_main, a.mss, b.main_iterations)};
}

// ---- 5: semantic preservation on the executable fixtures -------------------

Outcome semantic_preservation() {
  const std::vector<CorpusEntry> corpus = load_corpus(fixture_dir() / "programs");
  const VerifySettings toolchains = default_verify_settings();
  VerifyPolicy structural;
  structural.settings.stub_fallback = true;
  structural.run_compile = false;
  std::set<Language> languages;
  int programs = 0;
  int accepted = 0;
  int equivalent = 0;
  int skipped = 0;
  std::vector<std::string> violations;
  ReferenceCache references;
  const RuleEngine engine;
  for (const CorpusEntry& entry : corpus) {
    if (!entry.suite || !has_runner(entry.sample, toolchains)) {
      ++skipped;
      continue;
    }
    ++programs;
    languages.insert(entry.sample.language);
    const auto reference = references.results(entry.sample, *entry.suite, toolchains);
    // Interpreted programs are cheap to run, so they get more seeds.
    const int seeds = entry.sample.language == Language::kPython ? 3 : 1;
    for (const PerturbationMethod& m : build_catalog().methods()) {
      if (!engine.supported(m, entry.sample.language)) continue;
      for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed = derive_seed(static_cast<std::uint64_t>(s), m.id);
        PerturbationOutcome out;
        try {
          out = perturb(engine, entry.sample, m, seed);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kNotApplicable) continue;
          violations.push_back(entry.sample.id + " " + m.id + ": " + e.what());
          continue;
        }
        if (!verify(entry.sample, out.candidate, structural).passed) continue;
        ++accepted;
        std::string why;
        try {
          const BuiltProgram built(out.candidate, toolchains);
          const EquivalenceResult r =
              compare_with_reference(*reference, built, *entry.suite, toolchains);
          if (r.equivalent) {
            ++equivalent;
            continue;
          }
          why = r.diagnostics.empty() ? "outputs differ" : r.diagnostics.front();
        } catch (const Error& e) {
          why = e.what();
        }
        violations.push_back(format("%s %s seed %llu: %s", entry.sample.id.c_str(),
                                    m.id.c_str(), static_cast<unsigned long long>(seed),
                                    why.substr(0, 200).c_str()));
      }
    }
  }
  // Chains: the optimizer's final output, accepted step by step under the same
  // structural verification.
  int chains = 0;
  int chains_equivalent = 0;
  for (const CorpusEntry& entry : corpus) {
    if (!entry.suite || !has_runner(entry.sample, toolchains)) continue;
    PesoConfig config;
    config.rng_seed = derive_seed(7, entry.sample.id);
    const Optimizer opt(engine, build_catalog(), config, make_verifier(structural));
    const RunResult run = opt.run(entry.sample);
    if (run.final_sample.text == entry.sample.text) continue;
    ++chains;
    std::string why;
    try {
      const BuiltProgram built(run.final_sample, toolchains);
      const EquivalenceResult r = compare_with_reference(
          *references.results(entry.sample, *entry.suite, toolchains), built, *entry.suite,
          toolchains);
      if (r.equivalent) {
        ++chains_equivalent;
        continue;
      }
      why = r.diagnostics.empty() ? "outputs differ" : r.diagnostics.front();
    } catch (const Error& e) {
      why = e.what();
    }
    violations.push_back(entry.sample.id + " chain: " + why.substr(0, 200));
  }
  std::string detail =
      format("%d programs in %zu languages, %d/%d accepted perturbations and %d/%d chains "
             "equivalent",
             programs,
             languages.size(), equivalent, accepted, chains_equivalent, chains);
  if (skipped) detail += format(", %d entries without runner or inputs", skipped);
  for (std::size_t i = 0; i < violations.size() && i < 5; ++i) detail += "; " + violations[i];
  const bool pass = violations.empty() && programs >= 20 && languages.size() >= 2 &&
                    accepted > 0 && equivalent == accepted;
  return {pass, detail};
}

// ---- 6: selection versus random on a synthetic landscape -------------------

Outcome landscape() {
  // Three of the 26 methods: the random baseline reaches this category rarely.
  const MethodCategory favored = MethodCategory::kArithmetic;
  const testing::LandscapeEngine engine(favored, kLandscapeDelta);
  const CodeSample start = testing::scored_sample(1.0);
  long picks = 0;
  long main_steps = 0;
  for (int seed = 0; seed < kLandscapeSeeds; ++seed) {
    PesoConfig config;
    config.rng_seed = static_cast<std::uint64_t>(seed);
    const Optimizer opt(engine, build_catalog(), config, testing::fixed_verifier(true),
                        testing::text_scorer());
    for (const IterationRecord& rec : opt.run(start).trace) {
      if (rec.phase != Phase::kMain) continue;
      ++main_steps;
      picks += rec.category == favored ? 1 : 0;
    }
  }
  const double frequency = static_cast<double>(picks) / static_cast<double>(main_steps);
  const double uniform = 1.0 / static_cast<double>(kCategoryCount);

  double peso_sum = 0;
  double random_sum = 0;
  for (int seed = 0; seed < kPairedSeeds; ++seed) {
    PesoConfig config;
    config.rng_seed = static_cast<std::uint64_t>(1000 + seed);
    const Optimizer opt(engine, build_catalog(), config, testing::fixed_verifier(true),
                        testing::text_scorer());
    peso_sum += opt.run(start).mss;
    random_sum += opt.run_random_baseline(start).mss;
  }
  const double peso_mean = peso_sum / kPairedSeeds;
  const double random_mean = random_sum / kPairedSeeds;
  const Gains best = {0, 0, 0, 0, 0, kLandscapeDelta};
  const double ceiling = boltzmann_probabilities(best, PesoConfig{}.temperature)[index_of(favored)];
  return {frequency > 2.0 * uniform && peso_mean <= random_mean,
          format("favored-category frequency %.3f vs 2x uniform %.3f (law ceiling %.3f at T=2); "
                 "mean final ss peso %.4f vs random %.4f over %d seeds",
                 frequency, 2.0 * uniform, ceiling, peso_mean, random_mean, kPairedSeeds)};
}

// ---- 7: filtering boundaries -------------------------------------------------

Outcome filtering() {
  auto verdict = [](const char* name) {
    return filter_sample(load_sample(fixture_dir() / "filter" / name));
  };
  const FilterVerdict lines39 = verdict("lines_39.py");
  const FilterVerdict chars99 = verdict("chars_99.py");
  const FilterVerdict chars100 = verdict("chars_100.py");
  const FilterVerdict rust = verdict("library.rs");
  const CodeSample boundary = load_sample(fixture_dir() / "filter" / "chars_100.py");
  auto has_note = [](const FilterVerdict& v, const char* text) {
    return std::any_of(v.diagnostics.begin(), v.diagnostics.end(),
                       [&](const std::string& d) { return d.find(text) != std::string::npos; });
  };
  const bool pass =
      !lines39.kept && lines39.reasons == std::vector{FilterReason::kTooFewLines} &&
      !chars99.kept && chars99.reasons == std::vector{FilterReason::kTooFewChars} &&
      chars100.kept && count_lines(boundary.text) == 40 && count_chars(boundary.text) == 100 &&
      rust.kept && has_note(rust, "main");
  return {pass, format("39 lines kept=%d, 99 chars kept=%d, 40 lines/100 chars kept=%d, "
                       "rust without main kept=%d",
                       int(lines39.kept), int(chars99.kept), int(chars100.kept),
                       int(rust.kept))};
}

// ---- 8: task integrity ---------------------------------------------------------

int newline_count(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

Outcome task_integrity() {
  int eligible = 0;
  int partial = 0;
  int none = 0;
  int bad = 0;
  std::string first_bad;
  for (int seed = 0; seed < kTaskPairs; ++seed) {
    const testing::RandomPair pair = testing::random_pair(static_cast<std::uint64_t>(seed));
    TaskBuild build;
    try {
      build = build_tasks(pair.original, pair.perturbed, provenance_from_trace(pair.trace),
                          static_cast<std::uint64_t>(seed));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRegionUnavailable) {
        ++bad;
        first_bad = e.what();
      }
      ++none;
      continue;
    }
    const std::size_t sizes = kMaskSizes.size() - build.unavailable.size();
    bool ok = build.tasks.size() == 2 * sizes;
    for (std::size_t i = 0; ok && i + 1 < build.tasks.size(); i += 2) {
      const CompletionTask& o = build.tasks[i];
      const CompletionTask& p = build.tasks[i + 1];
      ok = o.variant == Variant::kOriginal && p.variant == Variant::kPerturbed &&
           o.prefix + o.ground_truth + o.suffix == pair.original.text &&
           p.prefix + p.ground_truth + p.suffix == pair.perturbed.text &&
           o.region_anchor == p.region_anchor && o.mask_lines == p.mask_lines &&
           newline_count(o.ground_truth) == o.mask_lines &&
           newline_count(p.ground_truth) == p.mask_lines;
    }
    if (build.unavailable.empty()) {
      ++eligible;
      ok = ok && build.tasks.size() == 6;
    } else {
      ++partial;
    }
    if (!ok) {
      ++bad;
      if (first_bad.empty()) first_bad = "pair " + std::to_string(seed);
    }
  }
  std::string detail = format("%d eligible pairs with 6 tasks, %d partial, %d without regions, "
                              "%d integrity failures",
                              eligible, partial, none, bad);
  if (!first_bad.empty()) detail += "; first: " + first_bad;
  return {bad == 0 && eligible > kTaskPairs / 2, detail};
}

// ---- 9: voting rule --------------------------------------------------------------

Outcome voting_rule() {
  const CodeSample original = make_original("v.py", Language::kPython, "print(1)\n");
  CodeSample candidate = original;
  candidate.text = "print(0 + 1)\n";
  candidate.origin = Origin::kIntermediate;
  candidate.lineage = {"equi_arithmetic_expression"};
  int agree = 0;
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<std::shared_ptr<const EquivalenceVoter>> voters;
    int yes = 0;
    for (int i = 0; i < 3; ++i) {
      const bool v = (mask >> i) & 1;
      yes += v ? 1 : 0;
      voters.push_back(std::make_shared<FixedVoter>("voter-" + std::to_string(i), v));
    }
    VerifyPolicy policy;
    policy.voters = voters;
    policy.settings.stub_fallback = false;
    const bool expected = yes >= 2;
    const bool voted = vote_equivalence(original, candidate, voters).passed;
    const bool verified = verify(original, candidate, policy).passed;
    agree += voted == expected && verified == expected ? 1 : 0;
  }
  return {agree == 8, format("%d/8 vote vectors decided as >=2 of 3", agree)};
}

// ---- 10: determinism of the CLI -------------------------------------------------

Outcome cli_determinism() {
  const ScratchDir dir;
  const std::string config = (fixture_dir() / "config" / "structural.json").string();
  const std::string corpus = (fixture_dir() / "programs").string();
  std::vector<std::string> traces;
  for (const char* out : {"first", "second"}) {
    const ProcessResult r =
        run_process({PK_CLI_PATH, "--config", config, "--output-dir", out, "--seed", "42",
                     "peso-run", "--corpus", corpus, "--engine", "rule"},
                    {}, 120, dir.path());
    if (r.exit_code != 0) return {false, "peso-run exited " + std::to_string(r.exit_code)};
    traces.push_back(testing::read_file(dir.path() / out / "peso" / "trace.jsonl"));
  }
  const bool same = traces[0] == traces[1] && !traces[0].empty();
  return {same, format("traces of %zu bytes %s", traces[0].size(),
                       same ? "byte-identical" : "differ")};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "combiner reproduces the reference similarity table", 1, combiner_table},
      {2, "selection probabilities follow the softmax law", 5, selection_law},
      {3, "accepted scores never increase and re-score exactly", 30, peso_monotone},
      {4, "early stop and full budget", 5, termination},
      {5, "rule perturbations preserve behaviour", 120, semantic_preservation},
      {6, "selection beats random on a synthetic landscape", 60, landscape},
      {7, "filter boundaries", 5, filtering},
      {8, "completion task integrity", 30, task_integrity},
      {9, "two-of-three vote", 1, voting_rule},
      {10, "peso-run traces are reproducible", 30, cli_determinism},
  };
  return all;
}

bool run_one(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = c.check();
  } catch (const std::exception& e) {
    outcome = {false, std::string("error: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < c.limit_s;
  const bool pass = outcome.pass && in_time;
  std::printf("criterion %d: %s  %s (%.2fs, limit %.0fs%s) - %s\n", c.number,
              pass ? "PASS" : "FAIL", c.name.c_str(), elapsed, c.limit_s,
              in_time ? "" : ", too slow", outcome.detail.c_str());
  std::fflush(stdout);
  return pass;
}

}  // namespace
}  // namespace pk

int main(int argc, char** argv) {
  bool all_pass = true;
  int ran = 0;
  for (const pk::Criterion& c : pk::criteria()) {
    if (argc > 1 && std::atoi(argv[1]) != c.number) continue;
    all_pass = pk::run_one(c) && all_pass;
    ++ran;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
    return 2;
  }
  return all_pass ? 0 : 1;
}

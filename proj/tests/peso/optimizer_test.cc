#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "perturbkit/core/error.h"
#include "perturbkit/peso/optimizer.h"
#include "support/synthetic.h"
#include "support/test_support.h"

namespace pk {
namespace {

using testing::fixed_verifier;
using testing::scored_sample;
using testing::text_scorer;

PesoConfig config_with_seed(std::uint64_t seed) {
  PesoConfig c;
  c.rng_seed = seed;
  return c;
}

VerificationReport passing() {
  VerificationReport r;
  r.syntax_ok = true;
  r.passed = true;
  return r;
}

TEST(Boltzmann, ZeroGainsAreUniform) {
  const Probabilities p = boltzmann_probabilities({}, 2.0);
  for (double x : p) EXPECT_NEAR(x, 1.0 / 6, 1e-15);
}

TEST(Boltzmann, SingleGainMatchesClosedForm) {
  const Probabilities p = boltzmann_probabilities({0.3, 0, 0, 0, 0, 0}, 2.0);
  const double e = std::exp(0.15);
  EXPECT_NEAR(p[0], e / (e + 5), 1e-12);
  for (int i = 1; i < 6; ++i) EXPECT_NEAR(p[i], 1 / (e + 5), 1e-12);
}

TEST(Boltzmann, ShiftInvarianceAndHighTemperature) {
  const Gains g{0.1, 0.4, 0.0, 0.2, 0.9, 0.3};
  Gains shifted = g;
  for (double& x : shifted) x += 7.5;
  const Probabilities a = boltzmann_probabilities(g, 2.0);
  const Probabilities b = boltzmann_probabilities(shifted, 2.0);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  const Probabilities hot = boltzmann_probabilities(g, 1e6);
  for (double x : hot) EXPECT_LT(std::abs(x - 1.0 / 6), 1e-4);
}

TEST(Boltzmann, MonotoneInOwnGainAndPositive) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    Gains g{};
    for (double& x : g) x = rng.uniform_real();
    const Probabilities p = boltzmann_probabilities(g, 2.0);
    double sum = 0;
    for (double x : p) {
      EXPECT_GT(x, 0);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    Gains up = g;
    up[2] += 0.05;
    EXPECT_GT(boltzmann_probabilities(up, 2.0)[2], p[2]);
  }
}

TEST(Boltzmann, RejectsNonPositiveTemperature) {
  EXPECT_THROW(boltzmann_probabilities({}, 0.0), Error);
}

TEST(GainUpdate, ImprovementIsAccepted) {
  OptimizerState s(scored_sample(1.0), 1);
  const CodeSample cand = scored_sample(0.765, 1);
  const GainResult r = gain_update(s, cand, MethodCategory::kLoop, passing(),
                                   {0.8, 0.73, 0.765});
  EXPECT_TRUE(r.accepted);
  EXPECT_NEAR(r.og, 0.235, 1e-12);
  EXPECT_DOUBLE_EQ(s.mss, 0.765);
  EXPECT_EQ(s.current.text, cand.text);
  EXPECT_NEAR(s.gains[index_of(MethodCategory::kLoop)], 0.235, 1e-12);
}

TEST(GainUpdate, WorseScoreLeavesStateAndZeroesLedger) {
  OptimizerState s(scored_sample(1.0), 1);
  s.mss = 0.765;
  s.gains[1] = 0.3;
  const std::string before = s.current.text;
  const GainResult r = gain_update(s, scored_sample(0.9, 1), MethodCategory::kCondition,
                                   passing(), {0.9, 0.9, 0.9});
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.og, 0);
  EXPECT_EQ(s.mss, 0.765);
  EXPECT_EQ(s.current.text, before);
  EXPECT_EQ(s.gains[1], 0);
}

TEST(GainUpdate, EqualScoreIsRetained) {
  OptimizerState s(scored_sample(1.0), 1);
  s.mss = 0.5;
  const CodeSample cand = scored_sample(0.5, 1);
  const GainResult r = gain_update(s, cand, MethodCategory::kBasic, passing(),
                                   {0.5, 0.5, 0.5});
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.og, 0);
  EXPECT_EQ(s.current.text, cand.text);
}

TEST(GainUpdate, FailedVerificationChangesNothing) {
  OptimizerState s(scored_sample(1.0), 1);
  VerificationReport failed;
  const GainResult r = gain_update(s, scored_sample(0.1, 1), MethodCategory::kBasic,
                                   failed, {0.1, 0.1, 0.1});
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(s.mss, 1.0);
  EXPECT_TRUE(s.current.lineage.empty());
}

TEST(SelectMethod, DominantGainWinsMonteCarlo) {
  const testing::HalvingEngine engine(0);
  OptimizerState s(scored_sample(1.0), 99);
  s.gains = {10, 0, 0, 0, 0, 0};
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const Selection sel = select_method(s, build_catalog(), PesoConfig{}, engine);
    ASSERT_NE(sel.method, nullptr);
    EXPECT_EQ(sel.method->category, sel.category);
    hits += sel.category == MethodCategory::kBasic;
  }
  EXPECT_GT(hits / 10000.0, 0.95);
}

TEST(SelectMethod, SameSeedSameSequence) {
  const testing::HalvingEngine engine(0);
  OptimizerState a(scored_sample(1.0), 7);
  OptimizerState b(scored_sample(1.0), 7);
  a.gains = b.gains = {0.1, 0.2, 0, 0.05, 0, 0.3};
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(select_method(a, build_catalog(), PesoConfig{}, engine).method,
              select_method(b, build_catalog(), PesoConfig{}, engine).method);
  }
}

TEST(Initialize, TraceOrderIsRenamesThenCategories) {
  const testing::LandscapeEngine engine(MethodCategory::kCondition, 0.1);
  const Optimizer opt(engine, build_catalog(), PesoConfig{}, fixed_verifier(true),
                      text_scorer());
  OptimizerState s(scored_sample(1.0), 3);
  opt.initialize(s);
  ASSERT_EQ(s.trace.size(), 8u);
  EXPECT_EQ(s.trace[0].method_id, "function_rename");
  EXPECT_EQ(s.trace[1].method_id, "variables_rename");
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    EXPECT_EQ(s.trace[2 + i].category, category_at(i));
    EXPECT_EQ(s.trace[2 + i].phase, Phase::kInit);
  }
  // Only the condition step lowered ss: 1.0 -> 0.9.
  EXPECT_NEAR(s.gains[index_of(MethodCategory::kCondition)], 0.1, 1e-12);
  EXPECT_NEAR(s.mss, 0.9, 1e-12);
  for (MethodCategory c : kAllCategories) {
    if (c != MethodCategory::kCondition) EXPECT_EQ(s.gains[index_of(c)], 0);
  }
}

TEST(Initialize, AllFailuresLeaveZeroGains) {
  const testing::HalvingEngine engine(0);
  const Optimizer opt(engine, build_catalog(), PesoConfig{}, fixed_verifier(false),
                      text_scorer());
  OptimizerState s(scored_sample(1.0), 3);
  opt.initialize(s);
  EXPECT_EQ(s.gains, Gains{});
  EXPECT_EQ(s.current.text, s.original.text);
  EXPECT_EQ(s.mss, 1.0);
}

TEST(Run, AlwaysFailingEngineUsesFullBudget) {
  const testing::InertEngine engine;
  const Optimizer opt(engine, build_catalog(), PesoConfig{}, fixed_verifier(true),
                      text_scorer());
  const RunResult r = opt.run(scored_sample(1.0));
  EXPECT_EQ(r.main_iterations, 15);
  EXPECT_FALSE(r.early_stop);
  EXPECT_EQ(r.final_sample.text, scored_sample(1.0).text);
  EXPECT_EQ(r.trace.size(), 2u + 6u + 15u);
}

TEST(Run, HalvingEngineStopsAfterThreeMainSteps) {
  const testing::HalvingEngine engine(8);
  const Optimizer opt(engine, build_catalog(), PesoConfig{}, fixed_verifier(true),
                      text_scorer());
  const RunResult r = opt.run(scored_sample(1.0));
  EXPECT_TRUE(r.early_stop);
  EXPECT_EQ(r.main_iterations, 3);
  EXPECT_DOUBLE_EQ(r.mss, 0.125);
}

TEST(Run, MssIsNonIncreasingAndProbabilitiesNormalized) {
  const testing::MutatingEngine engine;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Optimizer opt(engine, build_catalog(), config_with_seed(seed),
                        testing::hashed_verifier());
    const CodeSample original = testing::flat_python_sample();
    const RunResult r = opt.run(original);
    double last = 1.0;
    for (const IterationRecord& rec : r.trace) {
      EXPECT_LE(rec.mss, last);
      last = rec.mss;
      double sum = 0;
      for (double p : rec.probabilities) sum += p;
      EXPECT_NEAR(sum, 1.0, 1e-9);
      if (!rec.verified || (rec.score && !rec.accepted)) EXPECT_EQ(rec.og, 0);
    }
    EXPECT_NEAR(score_pair(original, r.final_sample, PesoConfig{}).ss, r.mss, 1e-12);
  }
}

TEST(Run, LedgerIsOverwrittenByEachIteration) {
  const testing::MutatingEngine engine;
  const Optimizer opt(engine, build_catalog(), config_with_seed(4),
                      testing::hashed_verifier());
  OptimizerState s(testing::flat_python_sample(), 4);
  opt.initialize(s);
  for (int i = 0; i < 10; ++i) {
    ++s.iter;
    const Selection sel = select_method(s, build_catalog(), opt.config(), engine);
    const IterationRecord rec = opt.attempt(s, sel.method, sel.category, Phase::kMain, true);
    EXPECT_EQ(s.gains[index_of(sel.category)], rec.og);
  }
}

TEST(Run, RejectedCandidatesDoNotChangeLineage) {
  const testing::HalvingEngine engine(0);
  const Optimizer opt(engine, build_catalog(), PesoConfig{}, fixed_verifier(false),
                      text_scorer());
  const RunResult r = opt.run(scored_sample(1.0));
  EXPECT_TRUE(r.final_sample.lineage.empty());
  EXPECT_EQ(r.final_sample.origin, Origin::kOriginal);
}

class FailingTransportEngine final : public testing::SyntheticEngine {
 public:
  PerturbationOutcome apply(const CodeSample&, const PerturbationMethod&,
                            std::uint64_t) const override {
    throw Error(ErrorCode::kEngineFailure, "transport exhausted");
  }
};

TEST(Run, TransportFailureAbortsWithPartialTrace) {
  const FailingTransportEngine engine;
  const Optimizer opt(engine, build_catalog(), PesoConfig{}, fixed_verifier(true),
                      text_scorer());
  const RunResult r = opt.run(scored_sample(1.0));
  EXPECT_NE(r.aborted.find("transport"), std::string::npos);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].method_id, "function_rename");
  EXPECT_FALSE(r.trace[0].error.empty());
}

TEST(RandomBaseline, DeterministicAndSameBudget) {
  const testing::MutatingEngine engine;
  const Optimizer opt(engine, build_catalog(), config_with_seed(12),
                      testing::hashed_verifier());
  const CodeSample original = testing::flat_python_sample();
  std::ostringstream a, b;
  write_trace(a, opt.run_random_baseline(original), original);
  write_trace(b, opt.run_random_baseline(original), original);
  EXPECT_EQ(a.str(), b.str());
  const testing::InertEngine inert;
  const Optimizer idle(inert, build_catalog(), PesoConfig{}, fixed_verifier(true),
                       text_scorer());
  EXPECT_EQ(idle.run_random_baseline(scored_sample(1.0)).main_iterations, 6 + 15);
}

TEST(RandomBaseline, CategoryFrequenciesFollowCategorySizes) {
  const testing::LandscapeEngine engine(MethodCategory::kBasic, 0.0);
  std::array<int, kCategoryCount> counts{};
  int total = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Optimizer opt(engine, build_catalog(), config_with_seed(seed),
                        fixed_verifier(true), text_scorer());
    for (const IterationRecord& rec : opt.run_random_baseline(scored_sample(1.0)).trace) {
      if (rec.phase != Phase::kMain) continue;
      ++counts[index_of(rec.category)];
      ++total;
    }
  }
  ASSERT_GE(total, 10000);
  const double sizes[] = {11, 6, 2, 2, 2, 3};
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    const double p = sizes[i] / 26;
    const double sigma = std::sqrt(total * p * (1 - p));
    EXPECT_LT(std::abs(counts[i] - total * p), 3 * sigma) << "category " << i;
  }
}

TEST(Trace, JsonLinesEndWithSummary) {
  const testing::HalvingEngine engine(8);
  const Optimizer opt(engine, build_catalog(), PesoConfig{}, fixed_verifier(true),
                      text_scorer());
  const CodeSample original = scored_sample(1.0);
  std::ostringstream out;
  write_trace(out, opt.run(original), original);
  std::istringstream in(out.str());
  std::vector<nlohmann::json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(lines.size(), 2u + 6u + 3u + 1u);
  EXPECT_EQ(lines.front()["method"], "function_rename");
  EXPECT_EQ(lines.back()["type"], "summary");
  EXPECT_EQ(lines.back()["final_ss"], 0.125);
  EXPECT_EQ(lines.back()["main_iterations"], 3);
}

TEST(Run, RuleEngineOnFixtureMatchesRescoring) {
  const RuleEngine engine;
  VerifyPolicy policy;
  policy.settings = VerifySettings{};
  const Optimizer opt(engine, build_catalog(), config_with_seed(1), make_verifier(policy));
  const CodeSample original = load_sample(testing::fixture_dir() / "programs/bank.py");
  const RunResult r = opt.run(original);
  EXPECT_TRUE(r.aborted.empty());
  EXPECT_LT(r.mss, 1.0);
  EXPECT_NEAR(score_pair(original, r.final_sample, PesoConfig{}).ss, r.mss, 1e-12);
  EXPECT_GE(r.final_sample.lineage.size(), 1u);
}

}  // namespace
}  // namespace pk

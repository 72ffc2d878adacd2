#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>

#include "perturbkit/core/catalog.h"
#include "perturbkit/core/error.h"
#include "perturbkit/transform/engine.h"
#include "perturbkit/verify/process.h"
#include "perturbkit/verify/verify.h"
#include "support/test_support.h"

namespace pk {
namespace {

using testing::fixture_dir;

CodeSample fixture(const std::string& rel) {
  return load_sample(fixture_dir() / rel);
}

CodeSample with_text(const CodeSample& base, std::string text) {
  CodeSample s = base;
  s.text = std::move(text);
  s.origin = Origin::kIntermediate;
  s.lineage = {"manual"};
  return s;
}

bool have(const VerifySettings& s, const std::string& key) {
  return s.runners.count(key) > 0;
}

// Ten gcd inputs of two integers each.
EquivalenceSpec gcd_suite() {
  EquivalenceSpec spec;
  for (int i = 0; i < 10; ++i) {
    spec.input_suite.push_back(
        {std::to_string(i * 7 - 9) + " " + std::to_string(i * i + 3) + "\n", {}});
  }
  return spec;
}

TEST(Process, CapturesOutputAndStatus) {
  const ScratchDir dir;
  const ProcessResult r =
      run_process({"sh", "-c", "cat; echo err >&2; exit 3"}, "abc", 5, dir.path());
  EXPECT_EQ(r.out, "abc");
  EXPECT_EQ(r.err, "err\n");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_FALSE(r.timed_out);
}

TEST(Process, KillsOnTimeout) {
  const ScratchDir dir;
  const ProcessResult r = run_process({"sleep", "5"}, "", 0.2, dir.path());
  EXPECT_TRUE(r.timed_out);
  EXPECT_FALSE(r.ok());
}

TEST(Process, MissingProgramIsToolchainUnavailable) {
  const ScratchDir dir;
  try {
    run_process({"definitely-not-a-program-xyz"}, "", 1, dir.path());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kToolchainUnavailable);
  }
}

TEST(Process, LargeStdinDoesNotDeadlock) {
  const ScratchDir dir;
  const std::string big(1 << 20, 'x');
  const ProcessResult r = run_process({"cat"}, big, 10, dir.path());
  EXPECT_EQ(r.out.size(), big.size());
}

TEST(Process, ExpandsPlaceholders) {
  EXPECT_EQ(expand_template({"cc", "{file}", "-o", "{dir}/p"}, "/a/x.c", "/a"),
            (std::vector<std::string>{"cc", "/a/x.c", "-o", "/a/p"}));
}

TEST(SyntaxCheck, ValidGoFile) {
  const CheckResult r = syntax_check(fixture("verify/hello.go"));
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(SyntaxCheck, UnbalancedPythonReportsLocation) {
  const CheckResult r = syntax_check(fixture("verify/unbalanced.py"));
  EXPECT_FALSE(r.ok);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_NE(r.diagnostics[0].find("line"), std::string::npos);
}

TEST(SyntaxCheck, RustWithoutMainGetsInjectedMain) {
  const CodeSample s = fixture("verify/library.rs");
  const CheckResult r = syntax_check(s);
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_NE(r.diagnostics[0].find("injected"), std::string::npos);
  bool injected = false;
  EXPECT_NE(compilable_text(s, &injected).find("fn main() {}"), std::string::npos);
  EXPECT_TRUE(injected);
}

TEST(SyntaxCheck, JavaPublicClassMustMatchFileName) {
  CodeSample s = fixture("verify/Greeter.java");
  EXPECT_TRUE(syntax_check(s).ok);
  EXPECT_EQ(scratch_file_name(s), "Greeter.java");
  s.path = "Other.java";
  EXPECT_FALSE(syntax_check(s).ok);
}

TEST(SyntaxCheck, MainPresentNeedsNoInjection) {
  const CodeSample s = fixture("programs/gcd.c");
  bool injected = true;
  EXPECT_EQ(compilable_text(s, &injected), s.text);
  EXPECT_FALSE(injected);
}

TEST(CompileCheck, AbsentWithoutToolchain) {
  VerifySettings settings;
  EXPECT_FALSE(compile_check(fixture("verify/hello.go"), settings).has_value());
}

TEST(CompileCheck, TypeErrorFailsWithCompilerOutput) {
  const VerifySettings settings = default_verify_settings();
  if (!settings.toolchains.count("cpp")) GTEST_SKIP() << "no C++ compiler";
  const auto r = compile_check(fixture("verify/type_error.cpp"), settings);
  ASSERT_TRUE(r.has_value());
  EXPECT_FALSE(r->ok);
  ASSERT_FALSE(r->diagnostics.empty());
  EXPECT_NE(r->diagnostics[0].find("error"), std::string::npos);
}

TEST(CompileCheck, WellFormedFilePasses) {
  const VerifySettings settings = default_verify_settings();
  if (!settings.toolchains.count("c")) GTEST_SKIP() << "no C compiler";
  const auto r = compile_check(fixture("programs/gcd.c"), settings);
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE(r->ok);
}

TEST(CompileCheck, ConfiguredButMissingToolchain) {
  VerifySettings settings;
  settings.toolchains["go"] = {"no-such-go-binary", "build", "{file}"};
  try {
    compile_check(fixture("verify/hello.go"), settings);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kToolchainUnavailable);
  }
}

TEST(ExecutionEquivalence, Reflexive) {
  const VerifySettings settings = default_verify_settings();
  if (!have(settings, "python")) GTEST_SKIP();
  const CodeSample s = fixture("programs/fib.py");
  const EquivalenceSpec spec = load_input_suite(fixture_dir() / "programs/fib.inputs.json");
  EXPECT_TRUE(execution_equivalence(s, s, spec, settings).equivalent);
}

TEST(ExecutionEquivalence, RenamedProgramAgreesOnTenInputs) {
  const VerifySettings settings = default_verify_settings();
  if (!have(settings, "c")) GTEST_SKIP();
  const CodeSample s = fixture("programs/gcd.c");
  const PerturbationOutcome renamed = rule_engine_apply(
      s, build_catalog().method_by_id("function_rename"), 11);
  ASSERT_NE(renamed.candidate.text, s.text);
  const EquivalenceSpec spec = gcd_suite();
  ASSERT_EQ(spec.input_suite.size(), 10u);
  EXPECT_TRUE(execution_equivalence(s, renamed.candidate, spec, settings).equivalent);
}

TEST(ExecutionEquivalence, FlippedComparisonIsCaughtAndSymmetric) {
  const VerifySettings settings = default_verify_settings();
  if (!have(settings, "c")) GTEST_SKIP();
  const CodeSample s = fixture("programs/gcd.c");
  std::string text = s.text;
  const std::string from = "if (g == 1 && a > 0)";
  const auto at = text.find(from);
  ASSERT_NE(at, std::string::npos);
  text.replace(at, from.size(), "if (g == 1 && a < 0)");
  const CodeSample flipped = with_text(s, text);
  EquivalenceSpec spec;
  spec.input_suite.push_back({"7 9\n", {}});  // gcd 1, a > 0
  const EquivalenceResult fwd = execution_equivalence(s, flipped, spec, settings);
  const EquivalenceResult back = execution_equivalence(flipped, s, spec, settings);
  EXPECT_FALSE(fwd.equivalent);
  EXPECT_EQ(fwd.equivalent, back.equivalent);
  ASSERT_EQ(fwd.diagnostics.size(), 1u);
  EXPECT_NE(fwd.diagnostics[0].find("input 0"), std::string::npos);
}

TEST(ExecutionEquivalence, ExtraParametersWithNeutralDefaults) {
  const VerifySettings settings = default_verify_settings();
  if (!have(settings, "python")) GTEST_SKIP();
  const CodeSample a = make_original("a", Language::kPython,
                                     "import sys\nprint(sum(map(int, sys.stdin.read().split())))\n");
  const CodeSample b = with_text(
      a,
      "import sys\nscale = int(sys.argv[1]) if len(sys.argv) > 1 else 5\n"
      "print(scale * sum(map(int, sys.stdin.read().split())))\n");
  EquivalenceSpec spec;
  spec.input_suite.push_back({"1 2 3", {}});
  EXPECT_FALSE(execution_equivalence(a, b, spec, settings).equivalent);
  spec.extra_params_allowed = true;
  spec.extra_param_defaults = {"1"};
  EXPECT_TRUE(execution_equivalence(a, b, spec, settings).equivalent);
}

TEST(ExecutionEquivalence, TimeoutIsReported) {
  VerifySettings settings = default_verify_settings();
  if (!have(settings, "python")) GTEST_SKIP();
  settings.exec_timeout_s = 0.3;
  const CodeSample a = make_original("a", Language::kPython, "print(1)\n");
  const CodeSample b = with_text(a, "while True:\n    pass\n");
  EquivalenceSpec spec;
  spec.input_suite.push_back({});
  try {
    execution_equivalence(a, b, spec, settings);
    FAIL() << "expected a timeout";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTimeout);
  }
}

TEST(Voting, MajorityOverAllThreeVoteVectors) {
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<Vote> votes;
    int yes = 0;
    for (int i = 0; i < 3; ++i) {
      const bool v = (mask >> i) & 1;
      yes += v;
      votes.push_back({"v" + std::to_string(i), v});
    }
    EXPECT_EQ(majority(votes), yes >= 2) << "mask " << mask;
  }
}

TEST(Voting, PaperStyleExamples) {
  EXPECT_TRUE(majority({{"a", true}, {"b", true}, {"c", false}}));
  EXPECT_FALSE(majority({{"a", true}, {"b", false}, {"c", false}}));
  EXPECT_TRUE(majority({{"a", true}, {"b", true}, {"c", true}}));
  EXPECT_FALSE(majority({}));
}

class ScriptedTransport final : public LlmTransport {
 public:
  explicit ScriptedTransport(std::vector<std::string> replies)
      : replies_(std::move(replies)) {}
  std::string complete(const ChatRequest&) override {
    const std::size_t i = next_++;
    if (i >= replies_.size() || replies_[i] == "!") {
      throw Error(ErrorCode::kEngineFailure, "transport down");
    }
    return replies_[i];
  }

 private:
  std::vector<std::string> replies_;
  std::atomic<std::size_t> next_{0};
};

TEST(Voting, TransportFailureCountsAsFalse) {
  const CodeSample s = make_original("s", Language::kPython, "print(1)\n");
  auto t = std::make_shared<ScriptedTransport>(
      std::vector<std::string>{"True", "!", "False."});
  LlmSettings llm;
  std::vector<std::shared_ptr<const EquivalenceVoter>> voters;
  for (int i = 0; i < 3; ++i) {
    voters.push_back(std::make_shared<LlmJudgeVoter>("v" + std::to_string(i), "m", llm, t));
  }
  const VoteOutcome out = vote_equivalence(s, s, voters);
  ASSERT_EQ(out.votes.size(), 3u);
  EXPECT_TRUE(out.votes[0].verdict);
  EXPECT_FALSE(out.votes[1].verdict);
  EXPECT_FALSE(out.votes[2].verdict);
  EXPECT_FALSE(out.passed);
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_NE(out.diagnostics[0].find("v1"), std::string::npos);
}

TEST(Voting, ParseVerdict) {
  EXPECT_TRUE(parse_verdict("True"));
  EXPECT_TRUE(parse_verdict("  true."));
  EXPECT_FALSE(parse_verdict("False"));
  EXPECT_FALSE(parse_verdict("**FALSE** because the loop differs; true otherwise"));
  EXPECT_THROW(parse_verdict("maybe"), Error);
}

TEST(Voting, JudgeRequestCarriesBothPrograms) {
  const CodeSample a = make_original("a", Language::kGo, "package main\nfunc main() {}\n");
  const CodeSample b = with_text(a, "package main\nfunc main() { }\n");
  const ChatRequest r = judge_request(a, b, "m", 0.0);
  ASSERT_EQ(r.messages.size(), 2u);
  EXPECT_NE(r.messages[0].content.find("Go"), std::string::npos);
  EXPECT_NE(r.messages[1].content.find(a.text), std::string::npos);
  EXPECT_NE(r.messages[1].content.find(b.text), std::string::npos);
}

TEST(Voting, MakeVotersDefaultsToThree) {
  Settings settings;
  EXPECT_TRUE(make_voters(settings, nullptr).empty());
  settings.llm.replay_dir = fixture_dir().string();
  auto t = std::make_shared<ScriptedTransport>(std::vector<std::string>{});
  EXPECT_EQ(make_voters(settings, t).size(), 3u);
}

VerifyPolicy stub_policy() {
  VerifyPolicy p;
  p.settings = VerifySettings{};
  return p;
}

TEST(Verify, SyntaxFailureShortCircuits) {
  const CodeSample s = fixture("programs/fib.py");
  VerifyPolicy p = stub_policy();
  p.settings = default_verify_settings();
  p.suite = load_input_suite(fixture_dir() / "programs/fib.inputs.json");
  const VerificationReport r = verify(s, with_text(s, "def f(:\n    return (1\n"), p);
  EXPECT_FALSE(r.syntax_ok);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.compile_ok.has_value());
  EXPECT_TRUE(r.votes.empty());
  EXPECT_EQ(r.equivalence_stage, "none");
}

TEST(Verify, RenamedPythonPassesExecutionOracle) {
  const VerifySettings settings = default_verify_settings();
  if (!have(settings, "python")) GTEST_SKIP();
  const CodeSample s = fixture("programs/stats.py");
  const PerturbationOutcome renamed = rule_engine_apply(
      s, build_catalog().method_by_id("variables_rename"), 3);
  VerifyPolicy p;
  p.settings = settings;
  p.suite = load_input_suite(fixture_dir() / "programs/stats.inputs.json");
  const VerificationReport r = verify(s, renamed.candidate, p);
  EXPECT_TRUE(r.syntax_ok);
  EXPECT_EQ(r.compile_ok, std::optional<bool>(true));
  EXPECT_EQ(r.equivalence_stage, "execution");
  EXPECT_TRUE(r.passed) << to_json(r).dump();
}

TEST(Verify, FailingVoteRejects) {
  const CodeSample s = make_original("s", Language::kPython, "print(1)\n");
  VerifyPolicy p = stub_policy();
  p.voters = {std::make_shared<FixedVoter>("a", true),
              std::make_shared<FixedVoter>("b", false),
              std::make_shared<FixedVoter>("c", false)};
  const VerificationReport r = verify(s, s, p);
  EXPECT_EQ(r.equivalence_stage, "vote");
  EXPECT_FALSE(r.passed);
  p.voters[1] = std::make_shared<FixedVoter>("b", true);
  EXPECT_TRUE(verify(s, s, p).passed);
}

TEST(Verify, StubFallbackAndNoStage) {
  const CodeSample s = make_original("s", Language::kPython, "print(1)\n");
  VerifyPolicy p = stub_policy();
  VerificationReport r = verify(s, s, p);
  EXPECT_EQ(r.equivalence_stage, "stub");
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.compile_ok.has_value());
  p.settings.stub_fallback = false;
  r = verify(s, s, p);
  EXPECT_EQ(r.equivalence_stage, "none");
  EXPECT_FALSE(r.passed);
}

TEST(Verify, CompileFailureRejects) {
  const VerifySettings settings = default_verify_settings();
  if (!settings.toolchains.count("cpp")) GTEST_SKIP();
  const CodeSample bad = fixture("verify/type_error.cpp");
  VerifyPolicy p;
  p.settings = settings;
  const VerificationReport r = verify(bad, bad, p);
  EXPECT_TRUE(r.syntax_ok);
  EXPECT_EQ(r.compile_ok, std::optional<bool>(false));
  EXPECT_FALSE(r.passed);
}

TEST(Verify, PassedMatchesComposition) {
  const CodeSample s = make_original("s", Language::kPython, "print(1)\n");
  for (int mask = 0; mask < 8; ++mask) {
    VerifyPolicy p = stub_policy();
    for (int i = 0; i < 3; ++i) {
      p.voters.push_back(std::make_shared<FixedVoter>(std::to_string(i), (mask >> i) & 1));
    }
    const VerificationReport r = verify(s, s, p);
    EXPECT_EQ(r.passed, r.syntax_ok && r.compile_ok.value_or(true) && majority(r.votes));
  }
}

}  // namespace
}  // namespace pk

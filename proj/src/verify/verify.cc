#include "perturbkit/core/error.h"
#include "perturbkit/verify/verify.h"

namespace pk {

namespace {

void append(std::vector<std::string>& out, std::string_view stage,
            const std::vector<std::string>& lines) {
  for (const std::string& line : lines) {
    out.push_back(std::string(stage) + ": " + line);
  }
}

}  // namespace

VerificationReport verify(const CodeSample& original,
                          const CodeSample& candidate,
                          const VerifyPolicy& policy) {
  VerificationReport report;
  report.equivalence_stage = "none";
  const CheckResult syntax = syntax_check(candidate);
  report.syntax_ok = syntax.ok;
  append(report.diagnostics, "syntax", syntax.diagnostics);
  if (!report.syntax_ok) return report;

  const bool oracle = policy.suite && !policy.suite->input_suite.empty() &&
                      has_runner(candidate, policy.settings);
  const auto runner = policy.settings.runners.find(
      toolchain_key(candidate.language, c_dialect(candidate)));
  const bool build_is_compile = policy.run_compile && oracle &&
                                runner != policy.settings.runners.end() &&
                                !runner->second.build.empty();

  if (policy.run_compile && !build_is_compile) {
    try {
      if (auto compiled = compile_check(candidate, policy.settings)) {
        report.compile_ok = compiled->ok;
        append(report.diagnostics, "compile", compiled->diagnostics);
      }
    } catch (const Error& e) {
      report.diagnostics.push_back(std::string("compile: skipped, ") + e.what());
    }
    if (report.compile_ok == false) return report;
  }

  if (oracle) {
    report.equivalence_stage = "execution";
    const ExecutionOracleVoter oracle_voter(*policy.suite, policy.settings);
    Vote v{oracle_voter.id(), false};
    try {
      ReferenceCache local;
      ReferenceCache& cache = policy.reference_cache ? *policy.reference_cache : local;
      const auto reference = cache.results(original, *policy.suite, policy.settings);
      std::optional<BuiltProgram> program;
      try {
        program.emplace(candidate, policy.settings);
      } catch (const Error& e) {
        if (!build_is_compile || (e.code() != ErrorCode::kCompileFailed &&
                                  e.code() != ErrorCode::kTimeout)) {
          throw;
        }
        report.compile_ok = false;
        report.equivalence_stage = "none";
        report.diagnostics.push_back(std::string("compile: ") + e.what());
        return report;
      }
      if (build_is_compile) report.compile_ok = true;
      const EquivalenceResult r =
          compare_with_reference(*reference, *program, *policy.suite, policy.settings);
      v.verdict = r.equivalent;
      append(report.diagnostics, "execution", r.diagnostics);
    } catch (const Error& e) {
      report.diagnostics.push_back(std::string("execution: ") + e.what());
    }
    report.votes.push_back(std::move(v));
  } else if (!policy.voters.empty()) {
    report.equivalence_stage = "vote";
    VoteOutcome outcome = vote_equivalence(original, candidate, policy.voters);
    report.votes = std::move(outcome.votes);
    append(report.diagnostics, "vote", outcome.diagnostics);
  } else if (policy.settings.stub_fallback) {
    report.equivalence_stage = "stub";
    report.votes.push_back({"stub", true});
  } else {
    report.diagnostics.push_back("equivalence: no stage available");
  }
  report.passed = majority(report.votes);
  return report;
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json votes = nlohmann::json::array();
  for (const Vote& v : report.votes) {
    votes.push_back({{"voter", v.voter_id}, {"verdict", v.verdict}});
  }
  nlohmann::json j = {{"syntax_ok", report.syntax_ok},
                      {"equivalence_stage", report.equivalence_stage},
                      {"votes", votes},
                      {"passed", report.passed},
                      {"diagnostics", report.diagnostics}};
  j["compile_ok"] = report.compile_ok ? nlohmann::json(*report.compile_ok)
                                      : nlohmann::json(nullptr);
  return j;
}

}  // namespace pk

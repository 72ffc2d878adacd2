#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/core/config.h"
#include "perturbkit/core/equivalence.h"
#include "perturbkit/core/error.h"
#include "perturbkit/core/sample.h"
#include "perturbkit/transform/transport.h"
#include "perturbkit/verify/process.h"

namespace pk {

struct CheckResult {
  bool ok = false;
  std::vector<std::string> diagnostics;
};

// Structural parse of the file plus per-language entry-point rules: Java
// public classes must match the file name; C-family, Go and Rust files
// without main are accepted with a note that an empty main is injected for
// compilation.
CheckResult syntax_check(const CodeSample& sample);

// Text handed to compilers: the sample with an empty main appended when the
// language needs one and the file has none.
std::string compilable_text(const CodeSample& sample, bool* injected = nullptr);

// File name used in scratch directories (Java: public class name).
std::string scratch_file_name(const CodeSample& sample);

// Runs the configured toolchain for the sample's language. Returns nullopt
// when none is configured. Throws Error(kToolchainUnavailable) when the
// configured command cannot be started.
std::optional<CheckResult> compile_check(const CodeSample& sample,
                                         const VerifySettings& settings);

struct EquivalenceResult {
  bool equivalent = false;
  std::vector<std::string> diagnostics;  // one line per differing input
};

// True iff every input yields byte-identical stdout and exit status. The
// candidate receives spec.extra_param_defaults appended to its arguments
// when spec.extra_params_allowed. Throws Error(kRunnerFailure) when no
// runner is configured, a runner cannot be started or a program fails to
// build, and Error(kTimeout) when a run exceeds the limit.
EquivalenceResult execution_equivalence(const CodeSample& original,
                                        const CodeSample& candidate,
                                        const EquivalenceSpec& spec,
                                        const VerifySettings& settings);

bool has_runner(const CodeSample& sample, const VerifySettings& settings);

// A sample written to its own scratch directory and built with the runner's
// build step. Throws Error(kCompileFailed) when the build fails,
// Error(kTimeout) when it times out and Error(kRunnerFailure) when no runner
// is configured.
class BuiltProgram {
 public:
  BuiltProgram(const CodeSample& sample, const VerifySettings& settings);

  ProcessResult run(const ProgramInput& input, const std::vector<std::string>& extra,
                    double timeout_s) const;

 private:
  ScratchDir dir_;
  std::vector<std::string> run_;
};

using ReferenceRuns = std::vector<ProcessResult>;

// The original's result for every input of a suite, computed once per
// (original, suite) and shared by all candidates compared against it.
// Thread-safe.
class ReferenceCache {
 public:
  // Throws Error(kRunnerFailure) when the original does not build and
  // Error(kTimeout) when a run does not finish; failures are cached too.
  std::shared_ptr<const ReferenceRuns> results(const CodeSample& original,
                                               const EquivalenceSpec& spec,
                                               const VerifySettings& settings);

 private:
  struct Entry {
    std::shared_ptr<const ReferenceRuns> runs;
    std::optional<Error> error;
  };
  std::mutex mutex_;
  std::map<std::string, Entry> entries_;
};

// Runs the candidate over the suite and compares with the reference.
// Throws Error(kTimeout) when a candidate run does not finish.
EquivalenceResult compare_with_reference(const ReferenceRuns& reference,
                                         const BuiltProgram& candidate,
                                         const EquivalenceSpec& spec,
                                         const VerifySettings& settings);

enum class VoterKind { kLlmJudge, kExecutionOracle, kAlwaysTrueStub };

std::string_view to_string(VoterKind kind);

class EquivalenceVoter {
 public:
  virtual ~EquivalenceVoter() = default;
  virtual const std::string& id() const = 0;
  virtual VoterKind kind() const = 0;
  // May throw; callers count exceptions as false votes.
  virtual bool vote(const CodeSample& original,
                    const CodeSample& candidate) const = 0;
};

class LlmJudgeVoter final : public EquivalenceVoter {
 public:
  LlmJudgeVoter(std::string id, std::string model, LlmSettings settings,
                std::shared_ptr<LlmTransport> transport);
  const std::string& id() const override { return id_; }
  VoterKind kind() const override { return VoterKind::kLlmJudge; }
  bool vote(const CodeSample& original,
            const CodeSample& candidate) const override;

 private:
  std::string id_;
  std::string model_;
  LlmSettings settings_;
  std::shared_ptr<LlmTransport> transport_;
};

class ExecutionOracleVoter final : public EquivalenceVoter {
 public:
  ExecutionOracleVoter(EquivalenceSpec spec, VerifySettings settings);
  const std::string& id() const override { return id_; }
  VoterKind kind() const override { return VoterKind::kExecutionOracle; }
  bool vote(const CodeSample& original,
            const CodeSample& candidate) const override;

 private:
  std::string id_ = "execution";
  EquivalenceSpec spec_;
  VerifySettings settings_;
};

// Returns a fixed verdict; the default is the always-true stub.
class FixedVoter final : public EquivalenceVoter {
 public:
  explicit FixedVoter(std::string id = "stub", bool verdict = true)
      : id_(std::move(id)), verdict_(verdict) {}
  const std::string& id() const override { return id_; }
  VoterKind kind() const override { return VoterKind::kAlwaysTrueStub; }
  bool vote(const CodeSample&, const CodeSample&) const override {
    return verdict_;
  }

 private:
  std::string id_;
  bool verdict_;
};

// Judging prompt sent to voter models. Not taken from any published
// pipeline; kept minimal.
ChatRequest judge_request(const CodeSample& original,
                          const CodeSample& candidate,
                          const std::string& model, double temperature);
// Reads a True/False verdict. Throws Error(kMalformedAnswer).
bool parse_verdict(const std::string& answer);

struct Vote {
  std::string voter_id;
  bool verdict = false;
};

// Strict majority: more true votes than false votes.
bool majority(const std::vector<Vote>& votes);

struct VoteOutcome {
  std::vector<Vote> votes;
  bool passed = false;
  std::vector<std::string> diagnostics;
};

// Voter exceptions become false votes with a diagnostic.
VoteOutcome vote_equivalence(
    const CodeSample& original, const CodeSample& candidate,
    const std::vector<std::shared_ptr<const EquivalenceVoter>>& voters);

struct VerificationReport {
  bool syntax_ok = false;
  std::optional<bool> compile_ok;
  std::string equivalence_stage;  // "execution", "vote", "stub" or "none"
  std::vector<Vote> votes;
  bool passed = false;
  std::vector<std::string> diagnostics;
};

nlohmann::json to_json(const VerificationReport& report);

struct VerifyPolicy {
  VerifySettings settings;
  // Inputs for the execution oracle; used when a runner exists.
  std::optional<EquivalenceSpec> suite;
  std::vector<std::shared_ptr<const EquivalenceVoter>> voters;
  bool run_compile = true;
  // Shared across calls with the same original; verify() uses a private
  // one when empty.
  std::shared_ptr<ReferenceCache> reference_cache;
};

// Voters built from settings.verify.voters; empty when the LLM is not
// configured.
std::vector<std::shared_ptr<const EquivalenceVoter>> make_voters(
    const Settings& settings, std::shared_ptr<LlmTransport> transport);

// syntax -> optional compile -> equivalence (execution oracle, else voters,
// else stub when allowed). When the execution oracle applies and its runner
// has a build step, that build is the compile check. Never throws for
// candidate problems.
VerificationReport verify(const CodeSample& original,
                          const CodeSample& candidate,
                          const VerifyPolicy& policy);

}  // namespace pk

#include <algorithm>
#include <cctype>
#include <regex>

#include "perturbkit/core/error.h"
#include "perturbkit/verify/verify.h"

namespace pk {

std::string_view to_string(VoterKind kind) {
  switch (kind) {
    case VoterKind::kLlmJudge: return "llm_judge";
    case VoterKind::kExecutionOracle: return "execution_oracle";
    case VoterKind::kAlwaysTrueStub: return "always_true_stub";
  }
  return "unknown";
}

ChatRequest judge_request(const CodeSample& original,
                          const CodeSample& candidate,
                          const std::string& model, double temperature) {
  const std::string lang = language_name(original);
  ChatRequest req;
  req.model = model;
  req.temperature = temperature;
  req.messages.push_back(
      {"system",
       "You judge whether two " + lang +
           " programs are semantically equivalent. Reply with exactly one "
           "word: True or False."});
  req.messages.push_back(
      {"user",
       "Program A:\n```\n" + original.text + "\n```\n\nProgram B:\n```\n" +
           candidate.text +
           "\n```\n\nDoes Program B produce the same observable behaviour as "
           "Program A for every input? Parameters that B adds with default "
           "values and that do not change its behaviour are allowed. Answer "
           "True or False."});
  return req;
}

bool parse_verdict(const std::string& answer) {
  static const std::regex word(R"(\b(true|false)\b)", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(answer, m, word)) {
    throw Error(ErrorCode::kMalformedAnswer,
                "verdict is neither True nor False: " + answer.substr(0, 200));
  }
  return std::tolower(static_cast<unsigned char>(m.str(1)[0])) == 't';
}

LlmJudgeVoter::LlmJudgeVoter(std::string id, std::string model,
                             LlmSettings settings,
                             std::shared_ptr<LlmTransport> transport)
    : id_(std::move(id)),
      model_(std::move(model)),
      settings_(std::move(settings)),
      transport_(std::move(transport)) {
  if (!transport_) {
    throw Error(ErrorCode::kConfigError, "voter " + id_ + " has no transport");
  }
}

bool LlmJudgeVoter::vote(const CodeSample& original,
                         const CodeSample& candidate) const {
  return parse_verdict(transport_->complete(
      judge_request(original, candidate, model_, settings_.temperature)));
}

ExecutionOracleVoter::ExecutionOracleVoter(EquivalenceSpec spec,
                                           VerifySettings settings)
    : spec_(std::move(spec)), settings_(std::move(settings)) {}

bool ExecutionOracleVoter::vote(const CodeSample& original,
                                const CodeSample& candidate) const {
  return execution_equivalence(original, candidate, spec_, settings_).equivalent;
}

bool majority(const std::vector<Vote>& votes) {
  const auto yes = std::count_if(votes.begin(), votes.end(),
                                 [](const Vote& v) { return v.verdict; });
  return 2 * static_cast<std::size_t>(yes) > votes.size();
}

VoteOutcome vote_equivalence(
    const CodeSample& original, const CodeSample& candidate,
    const std::vector<std::shared_ptr<const EquivalenceVoter>>& voters) {
  VoteOutcome outcome;
  for (const auto& voter : voters) {
    Vote v{voter->id(), false};
    try {
      v.verdict = voter->vote(original, candidate);
    } catch (const std::exception& e) {
      outcome.diagnostics.push_back("voter " + voter->id() +
                                    " failed, counted as False: " + e.what());
    }
    outcome.votes.push_back(std::move(v));
  }
  outcome.passed = majority(outcome.votes);
  return outcome;
}

std::vector<std::shared_ptr<const EquivalenceVoter>> make_voters(
    const Settings& settings, std::shared_ptr<LlmTransport> transport) {
  std::vector<std::shared_ptr<const EquivalenceVoter>> voters;
  if (!settings.llm.configured()) return voters;
  if (!transport) transport = make_transport(settings.llm);
  std::vector<VoterSettings> specs = settings.verify.voters;
  if (specs.empty()) {
    for (int i = 1; i <= 3; ++i) {
      specs.push_back({"voter-" + std::to_string(i), settings.llm.model});
    }
  }
  for (const VoterSettings& s : specs) {
    voters.push_back(std::make_shared<LlmJudgeVoter>(
        s.id, s.model.empty() ? settings.llm.model : s.model, settings.llm,
        transport));
  }
  return voters;
}

}  // namespace pk

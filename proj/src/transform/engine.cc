#include "perturbkit/transform/engine.h"

#include <map>

#include "perturbkit/core/error.h"
#include "perturbkit/core/rng.h"
#include "perturbkit/source/structure.h"
#include "perturbkit/transform/prompt.h"
#include "rules/rule_support.h"

namespace pk {

namespace {

const std::map<std::string, rules::RuleFn, std::less<>>& rule_table() {
  static const std::map<std::string, rules::RuleFn, std::less<>> table = {
      {"function_rename", rules::function_rename},
      {"variables_rename", rules::variables_rename},
      {"insert_junk_loop", rules::insert_junk_loop},
      {"insert_variables", rules::insert_variables},
      {"insert_junk_function", rules::insert_junk_function},
      {"statement_wrapping", rules::statement_wrapping},
      {"change_statement_order", rules::change_statement_order},
      {"add_condition", rules::add_condition},
      {"div_if_else", rules::div_if_else},
      {"div_composed_if", rules::div_composed_if},
      {"if_continue_to_if_else", rules::if_continue_to_if_else},
      {"for_while_transformation", rules::for_while_transformation},
      {"extract_if", rules::extract_if},
      {"extract_arithmetic", rules::extract_arithmetic},
      {"swap_boolean_expression", rules::swap_boolean_expression},
      {"equi_boolean_logic", rules::equi_boolean_logic},
      {"equi_arithmetic_expression", rules::equi_arithmetic_expression},
      {"modify_operations", rules::modify_operations},
  };
  return table;
}

CodeSample derive_candidate(const CodeSample& sample,
                            const PerturbationMethod& method,
                            std::string text) {
  CodeSample out = sample;
  out.text = std::move(text);
  out.origin = Origin::kIntermediate;
  out.lineage.push_back(method.id);
  return out;
}

}  // namespace

bool has_rule(std::string_view method_id) {
  return rule_table().contains(method_id);
}

PerturbationOutcome perturb(const PerturbationEngine& engine,
                            const CodeSample& sample,
                            const PerturbationMethod& method,
                            std::uint64_t seed) {
  if (!engine.supported(method, sample.language)) {
    throw Error(ErrorCode::kUnsupportedCombination,
                "engine " + std::string(to_string(engine.kind())) +
                    " does not implement " + method.id + " for " +
                    std::string(to_string(sample.language)));
  }
  return engine.apply(sample, method, seed);
}

PerturbationOutcome rule_engine_apply(const CodeSample& sample,
                                      const PerturbationMethod& method,
                                      std::uint64_t seed) {
  const auto it = rule_table().find(method.id);
  if (it == rule_table().end() || !method.rule_languages.contains(sample.language)) {
    throw Error(ErrorCode::kUnsupportedCombination,
                "no rule for " + method.id + " in " +
                    std::string(to_string(sample.language)));
  }
  const CDialect dialect = c_dialect(sample);
  const source::SourceModel model(sample.text, sample.language, dialect);
  Rng rng(seed ^ fnv1a64(method.id));
  const rules::RuleOutput out = it->second({sample, model, rng});
  if (out.text == sample.text) {
    throw Error(ErrorCode::kNotApplicable, method.id + " left the code unchanged");
  }
  try {
    source::SourceModel check(out.text, sample.language, dialect);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError,
                method.id + " produced code that does not parse: " + e.what());
  }
  PerturbationOutcome outcome;
  outcome.candidate = derive_candidate(sample, method, out.text);
  outcome.method = &method;
  outcome.engine_used = EngineKind::kRuleBased;
  outcome.entry_point = out.entry_point;
  outcome.renames = out.renames;
  outcome.notes = out.note;
  return outcome;
}

bool RuleEngine::supported(const PerturbationMethod& method,
                           Language language) const {
  return has_rule(method.id) && method.supported_by(EngineKind::kRuleBased, language);
}

PerturbationOutcome RuleEngine::apply(const CodeSample& sample,
                                      const PerturbationMethod& method,
                                      std::uint64_t seed) const {
  return rule_engine_apply(sample, method, seed);
}

LlmEngine::LlmEngine(LlmSettings settings, std::shared_ptr<LlmTransport> transport)
    : settings_(std::move(settings)), transport_(std::move(transport)) {
  if (!transport_) throw Error(ErrorCode::kConfigError, "LLM engine needs a transport");
}

PerturbationOutcome LlmEngine::apply(const CodeSample& sample,
                                     const PerturbationMethod& method,
                                     std::uint64_t seed) const {
  PromptBundle bundle = synthesize_prompt(sample, method);
  // Seed-chosen target function.
  try {
    const source::SourceModel model(sample.text, sample.language, c_dialect(sample));
    if (!model.functions().empty()) {
      Rng rng(seed ^ fnv1a64(method.id));
      bundle.code.entry_point =
          model.functions()[rng.uniform_index(model.functions().size())].name;
    }
  } catch (const Error&) {
    // Unparsable input: leave the whole file as the target.
  }
  const ChatRequest request = render_request(bundle, settings_.model, settings_.temperature);
  std::string raw;
  for (int attempt = 0;; ++attempt) {
    try {
      raw = transport_->complete(request);
      break;
    } catch (const Error& e) {
      if (attempt >= settings_.retries) {
        throw Error(ErrorCode::kEngineFailure,
                    "LLM request failed after " + std::to_string(attempt + 1) +
                        " attempt(s): " + e.what());
      }
    }
  }
  const LlmAnswer answer = parse_llm_answer(raw);
  if (answer.code == sample.text) {
    throw Error(ErrorCode::kNotApplicable, "LLM returned the code unchanged");
  }
  PerturbationOutcome outcome;
  outcome.candidate = derive_candidate(sample, method, answer.code);
  outcome.method = &method;
  outcome.engine_used = EngineKind::kLlm;
  outcome.entry_point = answer.entry_point;
  outcome.notes = "llm rewrite";
  return outcome;
}

HybridEngine::HybridEngine(std::shared_ptr<const PerturbationEngine> llm)
    : llm_(std::move(llm)) {
  if (!llm_) throw Error(ErrorCode::kConfigError, "hybrid engine needs an LLM engine");
}

PerturbationOutcome HybridEngine::apply(const CodeSample& sample,
                                        const PerturbationMethod& method,
                                        std::uint64_t seed) const {
  if (rules_.supported(method, sample.language)) {
    PerturbationOutcome out = rules_.apply(sample, method, seed);
    out.engine_used = EngineKind::kRuleBased;
    return out;
  }
  return llm_->apply(sample, method, seed);
}

std::unique_ptr<PerturbationEngine> make_engine(const Settings& settings) {
  if (settings.engine == EngineKind::kRuleBased) return std::make_unique<RuleEngine>();
  if (!settings.llm.configured()) {
    throw Error(ErrorCode::kConfigError,
                "engine '" + std::string(to_string(settings.engine)) +
                    "' needs llm.base_url or llm.replay_dir");
  }
  auto transport = make_transport(settings.llm);
  if (settings.engine == EngineKind::kLlm) {
    return std::make_unique<LlmEngine>(settings.llm, std::move(transport));
  }
  auto llm = std::make_shared<LlmEngine>(settings.llm, std::move(transport));
  return std::make_unique<HybridEngine>(std::move(llm));
}

}  // namespace pk

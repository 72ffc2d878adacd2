#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "perturbkit/core/catalog.h"
#include "perturbkit/core/config.h"
#include "perturbkit/core/sample.h"
#include "perturbkit/transform/transport.h"

namespace pk {

struct PerturbationOutcome {
  CodeSample candidate;  // origin kIntermediate, lineage + method id
  const PerturbationMethod* method = nullptr;
  EngineKind engine_used = EngineKind::kRuleBased;
  std::string entry_point;
  // Function or variable renames performed (old name -> new name).
  std::map<std::string, std::string> renames;
  std::string notes;
};

class PerturbationEngine {
 public:
  virtual ~PerturbationEngine() = default;
  virtual EngineKind kind() const = 0;
  virtual bool supported(const PerturbationMethod& method,
                         Language language) const = 0;
  // Implementations may assume supported(method, sample.language).
  // Thread-safe.
  virtual PerturbationOutcome apply(const CodeSample& sample,
                                    const PerturbationMethod& method,
                                    std::uint64_t seed) const = 0;
};

// Checks support, then delegates. Throws Error(kUnsupportedCombination),
// Error(kNotApplicable), Error(kParseError) (rule output or input does not
// parse), Error(kEngineFailure) (LLM transport) or Error(kMalformedAnswer).
PerturbationOutcome perturb(const PerturbationEngine& engine,
                            const CodeSample& sample,
                            const PerturbationMethod& method,
                            std::uint64_t seed);

// Deterministic rewrite by the built-in rules.
PerturbationOutcome rule_engine_apply(const CodeSample& sample,
                                      const PerturbationMethod& method,
                                      std::uint64_t seed);

// True if the rule engine has an implementation for the method id at all.
bool has_rule(std::string_view method_id);

class RuleEngine final : public PerturbationEngine {
 public:
  EngineKind kind() const override { return EngineKind::kRuleBased; }
  bool supported(const PerturbationMethod& method,
                 Language language) const override;
  PerturbationOutcome apply(const CodeSample& sample,
                            const PerturbationMethod& method,
                            std::uint64_t seed) const override;
};

class LlmEngine final : public PerturbationEngine {
 public:
  LlmEngine(LlmSettings settings, std::shared_ptr<LlmTransport> transport);

  EngineKind kind() const override { return EngineKind::kLlm; }
  bool supported(const PerturbationMethod&, Language) const override {
    return true;
  }
  PerturbationOutcome apply(const CodeSample& sample,
                            const PerturbationMethod& method,
                            std::uint64_t seed) const override;

 private:
  LlmSettings settings_;
  std::shared_ptr<LlmTransport> transport_;
};

class HybridEngine final : public PerturbationEngine {
 public:
  explicit HybridEngine(std::shared_ptr<const PerturbationEngine> llm);

  EngineKind kind() const override { return EngineKind::kHybrid; }
  bool supported(const PerturbationMethod&, Language) const override {
    return true;
  }
  PerturbationOutcome apply(const CodeSample& sample,
                            const PerturbationMethod& method,
                            std::uint64_t seed) const override;

 private:
  RuleEngine rules_;
  std::shared_ptr<const PerturbationEngine> llm_;
};

// Builds the engine named in settings. LLM and hybrid engines need
// settings.llm to be configured; throws Error(kConfigError) otherwise.
std::unique_ptr<PerturbationEngine> make_engine(const Settings& settings);

}  // namespace pk

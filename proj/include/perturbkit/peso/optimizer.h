#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/core/catalog.h"
#include "perturbkit/core/config.h"
#include "perturbkit/core/rng.h"
#include "perturbkit/core/sample.h"
#include "perturbkit/similarity/similarity.h"
#include "perturbkit/transform/engine.h"
#include "perturbkit/verify/verify.h"

namespace pk {

using Gains = std::array<double, kCategoryCount>;
using Probabilities = std::array<double, kCategoryCount>;

// Softmax of gains / temperature. Throws Error(kConfigError) when
// temperature <= 0.
Probabilities boltzmann_probabilities(const Gains& gains, double temperature);

enum class Phase { kRename, kInit, kMain };
std::string_view to_string(Phase phase);

struct IterationRecord {
  Phase phase = Phase::kMain;
  int iter = 0;  // 1-based main-loop index; 0 outside the main loop
  std::string method_id;
  MethodCategory category = MethodCategory::kBasic;
  bool verified = false;
  std::optional<SimilarityScore> score;
  double og = 0.0;
  bool accepted = false;
  double mss = 1.0;  // after this step
  // Distribution the next main-loop method is drawn from.
  Probabilities probabilities{};
  std::string entry_point;
  std::map<std::string, std::string> renames;  // old -> new, when accepted
  std::string error;  // why no verified candidate was produced
  std::optional<VerificationReport> report;
};

struct OptimizerState {
  OptimizerState(CodeSample original, std::uint64_t seed);

  CodeSample original;
  CodeSample current;
  double mss = 1.0;
  SimilarityScore current_score{1.0, 1.0, 1.0};
  Gains gains{};
  int iter = 0;
  Rng rng;
  std::vector<IterationRecord> trace;
};

struct GainResult {
  double og = 0.0;
  bool accepted = false;
};

// Acceptance rule: a verified candidate with ss <= mss replaces current and
// lowers mss; og = mss - ss. Otherwise og = 0 and the state is unchanged.
// Does not touch the gain ledger.
GainResult apply_acceptance(OptimizerState& state, const CodeSample& candidate,
                            const VerificationReport& report,
                            const SimilarityScore& score);

// apply_acceptance plus the ledger overwrite gains[category] = og.
GainResult gain_update(OptimizerState& state, const CodeSample& candidate,
                       MethodCategory category,
                       const VerificationReport& report,
                       const SimilarityScore& score);

using Verifier = std::function<VerificationReport(const CodeSample& original,
                                                  const CodeSample& candidate)>;
using Scorer = std::function<SimilarityScore(const CodeSample& original,
                                             const CodeSample& candidate)>;

Verifier make_verifier(VerifyPolicy policy);

// Methods of `category` the engine can apply to `language`, in table order.
std::vector<const PerturbationMethod*> usable_methods(
    const MethodCatalog& catalog, MethodCategory category,
    const PerturbationEngine& engine, Language language);

struct Selection {
  MethodCategory category = MethodCategory::kBasic;
  const PerturbationMethod* method = nullptr;  // nullptr: none usable
};

// Draws a category from the Boltzmann distribution over state.gains, then a
// uniform method among the usable ones in it.
Selection select_method(OptimizerState& state, const MethodCatalog& catalog,
                        const PesoConfig& config,
                        const PerturbationEngine& engine);

struct RunResult {
  std::string mode;  // "peso" or "random"
  CodeSample final_sample;
  double mss = 1.0;
  SimilarityScore final_score{1.0, 1.0, 1.0};
  Gains gains{};
  std::vector<IterationRecord> trace;
  int main_iterations = 0;
  bool early_stop = false;
  std::string aborted;  // non-empty when the engine failed unrecoverably
};

class Optimizer {
 public:
  // An empty scorer means score_pair under `config`.
  Optimizer(const PerturbationEngine& engine, const MethodCatalog& catalog,
            PesoConfig config, Verifier verifier, Scorer scorer = {});

  // Rename phase, then one method per category in table order.
  void initialize(OptimizerState& state) const;

  // One perturb -> verify -> score -> acceptance step on state.current.
  // Throws Error(kEngineFailure) on transport failure.
  IterationRecord attempt(OptimizerState& state,
                          const PerturbationMethod* method,
                          MethodCategory category, Phase phase,
                          bool update_gains) const;

  RunResult run(const CodeSample& original) const;
  // Same budget and acceptance rule; methods drawn uniformly from every
  // usable method, with no gain ledger.
  RunResult run_random_baseline(const CodeSample& original) const;

  const PesoConfig& config() const { return config_; }

 private:
  void rename_phase(OptimizerState& state) const;
  bool should_stop(const OptimizerState& state) const;

  const PerturbationEngine& engine_;
  const MethodCatalog& catalog_;
  PesoConfig config_;
  Verifier verifier_;
  Scorer scorer_;
};

nlohmann::json to_json(const IterationRecord& record);
// Reads back the fields written by to_json; the verification report is not
// restored. Throws Error(kConfigError).
IterationRecord record_from_json(const nlohmann::json& j);
nlohmann::json summary_json(const RunResult& result,
                            const CodeSample& original);
// One record per line, then the summary line. Each line carries the sample
// id.
void write_trace(std::ostream& out, const RunResult& result,
                 const CodeSample& original);

}  // namespace pk

#include "perturbkit/peso/optimizer.h"

#include <algorithm>
#include <cmath>

#include "perturbkit/core/error.h"

namespace pk {

using nlohmann::json;

namespace {

constexpr const char* kRenameMethods[] = {"function_rename", "variables_rename"};

Probabilities category_shares(const MethodCatalog& catalog,
                              const PerturbationEngine& engine,
                              Language language) {
  Probabilities p{};
  double total = 0;
  for (MethodCategory c : kAllCategories) {
    p[index_of(c)] = static_cast<double>(usable_methods(catalog, c, engine, language).size());
    total += p[index_of(c)];
  }
  for (double& x : p) x = total > 0 ? x / total : 1.0 / kCategoryCount;
  return p;
}

}  // namespace

Probabilities boltzmann_probabilities(const Gains& gains, double temperature) {
  if (!(temperature > 0)) {
    throw Error(ErrorCode::kConfigError, "temperature must be positive");
  }
  const double top = *std::max_element(gains.begin(), gains.end());
  Probabilities p{};
  double sum = 0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    p[i] = std::exp((gains[i] - top) / temperature);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kRename: return "rename";
    case Phase::kInit: return "init";
    case Phase::kMain: return "main";
  }
  return "unknown";
}

OptimizerState::OptimizerState(CodeSample original_sample, std::uint64_t seed)
    : original(std::move(original_sample)), current(original), rng(seed) {}

GainResult apply_acceptance(OptimizerState& state, const CodeSample& candidate,
                            const VerificationReport& report,
                            const SimilarityScore& score) {
  if (!report.passed || score.ss > state.mss) return {};
  GainResult result{state.mss - score.ss, true};
  state.mss = score.ss;
  state.current_score = score;
  state.current = candidate;
  state.current.origin = Origin::kAccepted;
  return result;
}

GainResult gain_update(OptimizerState& state, const CodeSample& candidate,
                       MethodCategory category,
                       const VerificationReport& report,
                       const SimilarityScore& score) {
  const GainResult result = apply_acceptance(state, candidate, report, score);
  state.gains[index_of(category)] = result.og;
  return result;
}

Verifier make_verifier(VerifyPolicy policy) {
  if (!policy.reference_cache) policy.reference_cache = std::make_shared<ReferenceCache>();
  return [policy = std::move(policy)](const CodeSample& original,
                                      const CodeSample& candidate) {
    return verify(original, candidate, policy);
  };
}

std::vector<const PerturbationMethod*> usable_methods(
    const MethodCatalog& catalog, MethodCategory category,
    const PerturbationEngine& engine, Language language) {
  std::vector<const PerturbationMethod*> out;
  for (const PerturbationMethod* m : catalog.by_category(category)) {
    if (engine.supported(*m, language)) out.push_back(m);
  }
  return out;
}

Selection select_method(OptimizerState& state, const MethodCatalog& catalog,
                        const PesoConfig& config,
                        const PerturbationEngine& engine) {
  const Probabilities p = boltzmann_probabilities(state.gains, config.temperature);
  const double u = state.rng.uniform_real();
  std::size_t index = kCategoryCount - 1;
  double acc = 0;
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    acc += p[i];
    if (u < acc) {
      index = i;
      break;
    }
  }
  Selection sel;
  sel.category = category_at(index);
  const auto methods =
      usable_methods(catalog, sel.category, engine, state.original.language);
  if (!methods.empty()) {
    sel.method = methods[state.rng.uniform_index(methods.size())];
  }
  return sel;
}

Optimizer::Optimizer(const PerturbationEngine& engine,
                     const MethodCatalog& catalog, PesoConfig config,
                     Verifier verifier, Scorer scorer)
    : engine_(engine),
      catalog_(catalog),
      config_(config),
      verifier_(std::move(verifier)),
      scorer_(std::move(scorer)) {
  config_.validate();
  if (!verifier_) throw Error(ErrorCode::kConfigError, "optimizer needs a verifier");
  if (!scorer_) {
    scorer_ = [config](const CodeSample& a, const CodeSample& b) {
      return score_pair(a, b, config);
    };
  }
}

IterationRecord Optimizer::attempt(OptimizerState& state,
                                   const PerturbationMethod* method,
                                   MethodCategory category, Phase phase,
                                   bool update_gains) const {
  IterationRecord rec;
  rec.phase = phase;
  rec.iter = phase == Phase::kMain ? state.iter : 0;
  rec.category = category;
  GainResult gain;
  if (method == nullptr) {
    rec.error = "no usable method in category " + std::string(to_string(category));
  } else {
    rec.method_id = method->id;
    std::optional<PerturbationOutcome> outcome;
    try {
      outcome = perturb(engine_, state.current, *method, state.rng.next());
    } catch (const Error& e) {
      rec.error = e.what();
      if (e.code() == ErrorCode::kEngineFailure) {
        rec.mss = state.mss;
        rec.probabilities = boltzmann_probabilities(state.gains, config_.temperature);
        state.trace.push_back(rec);
        throw;
      }
    }
    if (outcome) {
      rec.entry_point = outcome->entry_point;
      rec.report = verifier_(state.original, outcome->candidate);
      rec.verified = rec.report->passed;
      if (rec.verified) {
        try {
          rec.score = scorer_(state.original, outcome->candidate);
        } catch (const Error& e) {
          rec.error = std::string("scoring failed: ") + e.what();
        }
      }
      if (rec.score) {
        gain = apply_acceptance(state, outcome->candidate, *rec.report, *rec.score);
        if (gain.accepted) rec.renames = outcome->renames;
      }
    }
  }
  rec.og = gain.og;
  rec.accepted = gain.accepted;
  if (update_gains) state.gains[index_of(category)] = gain.og;
  rec.mss = state.mss;
  rec.probabilities = boltzmann_probabilities(state.gains, config_.temperature);
  state.trace.push_back(rec);
  return rec;
}

void Optimizer::rename_phase(OptimizerState& state) const {
  for (const char* id : kRenameMethods) {
    const PerturbationMethod& m = catalog_.method_by_id(id);
    const bool usable = engine_.supported(m, state.original.language);
    attempt(state, usable ? &m : nullptr, m.category, Phase::kRename, false);
    if (!usable) {
      state.trace.back().method_id = m.id;
      state.trace.back().error = "engine does not support " + m.id;
    }
  }
}

void Optimizer::initialize(OptimizerState& state) const {
  rename_phase(state);
  for (MethodCategory c : kAllCategories) {
    const auto methods = usable_methods(catalog_, c, engine_, state.original.language);
    const PerturbationMethod* m =
        methods.empty() ? nullptr : methods[state.rng.uniform_index(methods.size())];
    attempt(state, m, c, Phase::kInit, true);
  }
}

bool Optimizer::should_stop(const OptimizerState& state) const {
  return state.mss <= config_.ss_threshold;
}

namespace {

RunResult finish(OptimizerState& state, std::string mode, bool stopped) {
  RunResult r;
  r.mode = std::move(mode);
  r.final_sample = state.current;
  r.mss = state.mss;
  r.final_score = state.current_score;
  r.gains = state.gains;
  r.trace = std::move(state.trace);
  r.main_iterations = state.iter;
  r.early_stop = stopped;
  return r;
}

}  // namespace

RunResult Optimizer::run(const CodeSample& original) const {
  OptimizerState state(original, derive_seed(config_.rng_seed, original.id));
  std::string aborted;
  try {
    initialize(state);
    while (state.iter < config_.max_iter && !should_stop(state)) {
      ++state.iter;
      const Selection sel = select_method(state, catalog_, config_, engine_);
      attempt(state, sel.method, sel.category, Phase::kMain, true);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEngineFailure) throw;
    aborted = e.what();
  }
  RunResult r = finish(state, "peso", should_stop(state));
  r.aborted = std::move(aborted);
  return r;
}

RunResult Optimizer::run_random_baseline(const CodeSample& original) const {
  OptimizerState state(original, derive_seed(config_.rng_seed, original.id));
  const Language lang = original.language;
  std::vector<const PerturbationMethod*> pool;
  for (const PerturbationMethod& m : catalog_.methods()) {
    if (engine_.supported(m, lang)) pool.push_back(&m);
  }
  const Probabilities shares = category_shares(catalog_, engine_, lang);
  // Same number of selected perturbations as the optimizer: one per
  // category during initialization plus the main loop.
  const int budget = static_cast<int>(kCategoryCount) + config_.max_iter;
  std::string aborted;
  try {
    rename_phase(state);
    while (state.iter < budget && !should_stop(state)) {
      ++state.iter;
      const PerturbationMethod* m =
          pool.empty() ? nullptr : pool[state.rng.uniform_index(pool.size())];
      attempt(state, m, m ? m->category : MethodCategory::kBasic, Phase::kMain, false);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEngineFailure) throw;
    aborted = e.what();
  }
  for (IterationRecord& rec : state.trace) rec.probabilities = shares;
  RunResult r = finish(state, "random", should_stop(state));
  r.aborted = std::move(aborted);
  return r;
}

json to_json(const IterationRecord& rec) {
  json j = {{"phase", to_string(rec.phase)},
            {"iter", rec.iter},
            {"method", rec.method_id},
            {"category", to_string(rec.category)},
            {"verified", rec.verified},
            {"og", rec.og},
            {"accepted", rec.accepted},
            {"mss", rec.mss},
            {"probabilities", rec.probabilities},
            {"entry_point", rec.entry_point},
            {"renames", rec.renames},
            {"error", rec.error}};
  j["score"] = rec.score ? json{{"s1", rec.score->s1},
                                {"s2", rec.score->s2},
                                {"ss", rec.score->ss}}
                         : json(nullptr);
  j["verification"] = rec.report ? to_json(*rec.report) : json(nullptr);
  return j;
}

IterationRecord record_from_json(const json& j) {
  try {
    IterationRecord rec;
    const std::string phase = j.at("phase").get<std::string>();
    rec.phase = phase == "rename" ? Phase::kRename : phase == "init" ? Phase::kInit : Phase::kMain;
    rec.iter = j.at("iter").get<int>();
    rec.method_id = j.at("method").get<std::string>();
    const std::string category = j.at("category").get<std::string>();
    for (MethodCategory c : kAllCategories) {
      if (to_string(c) == category) rec.category = c;
    }
    rec.verified = j.at("verified").get<bool>();
    rec.og = j.at("og").get<double>();
    rec.accepted = j.at("accepted").get<bool>();
    rec.mss = j.at("mss").get<double>();
    rec.probabilities = j.at("probabilities").get<Probabilities>();
    rec.entry_point = j.at("entry_point").get<std::string>();
    rec.renames = j.at("renames").get<std::map<std::string, std::string>>();
    rec.error = j.value("error", std::string{});
    if (j.contains("score") && !j.at("score").is_null()) {
      const json& s = j.at("score");
      rec.score = SimilarityScore{s.at("s1").get<double>(), s.at("s2").get<double>(),
                                  s.at("ss").get<double>()};
    }
    return rec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("trace record: ") + e.what());
  }
}

json summary_json(const RunResult& result, const CodeSample& original) {
  return {{"type", "summary"},
          {"sample", original.id},
          {"language", to_string(original.language)},
          {"mode", result.mode},
          {"final_ss", result.mss},
          {"final_score",
           {{"s1", result.final_score.s1},
            {"s2", result.final_score.s2},
            {"ss", result.final_score.ss}}},
          {"gains", result.gains},
          {"main_iterations", result.main_iterations},
          {"early_stop", result.early_stop},
          {"methods_applied", result.final_sample.lineage},
          {"aborted", result.aborted}};
}

void write_trace(std::ostream& out, const RunResult& result,
                 const CodeSample& original) {
  for (const IterationRecord& rec : result.trace) {
    json j = to_json(rec);
    j["type"] = "iteration";
    j["sample"] = original.id;
    j["mode"] = result.mode;
    out << j.dump() << '\n';
  }
  out << summary_json(result, original).dump() << '\n';
}

}  // namespace pk

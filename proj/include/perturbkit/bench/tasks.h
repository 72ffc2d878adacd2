#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/core/sample.h"
#include "perturbkit/peso/optimizer.h"

namespace pk {

enum class Variant { kOriginal, kPerturbed };
std::string_view to_string(Variant variant);

inline constexpr std::array<int, 3> kMaskSizes = {1, 3, 5};

struct CompletionTask {
  std::string task_id;
  std::string sample_id;
  Language language = Language::kPython;
  Variant variant = Variant::kOriginal;
  int mask_lines = 1;
  std::string prefix;
  std::string ground_truth;
  std::string suffix;
  // "<function>@<offset ratio>"; equal across the two variants of a pair.
  std::string region_anchor;
};

// Which functions of the perturbed variant were touched, and what each one
// was called in the original.
struct PairProvenance {
  std::vector<std::string> perturbed_functions;  // names in the perturbed text
  std::map<std::string, std::string> original_name;  // perturbed -> original
};

// Entry points of accepted steps, carried forward through later renames.
PairProvenance provenance_from_trace(const std::vector<IterationRecord>& trace);

struct TaskBuild {
  std::vector<CompletionTask> tasks;
  std::vector<std::string> unavailable;  // one note per skipped mask size
};

// For each mask size, picks a seed-random run of maskable lines inside a
// perturbed function and the matching run in the original, emitting an
// original and a perturbed task. Sizes without a region are listed in
// `unavailable`; throws Error(kRegionUnavailable) when no size fits.
TaskBuild build_tasks(const CodeSample& original, const CodeSample& perturbed,
                      const PairProvenance& provenance, std::uint64_t seed);

enum class Judge { kExactMatch, kNormalizedMatch, kExternal };
std::string_view to_string(Judge judge);
Judge parse_judge(std::string_view name);

using ExternalJudge =
    std::function<bool(const CompletionTask& task, const std::string& completion)>;

// Token-level comparison that ignores whitespace and comments.
bool normalized_match(const std::string& expected, const std::string& actual,
                      Language language);

struct AccuracyCell {
  int correct = 0;
  int total = 0;
  double accuracy() const { return total == 0 ? 0.0 : double(correct) / total; }
};

struct AccuracyReport {
  // Keyed by (variant, mask size).
  std::map<std::pair<Variant, int>, AccuracyCell> cells;
  // Original accuracy minus perturbed accuracy, per mask size.
  std::map<int, double> delta;
  std::vector<std::string> missing;
};

// Missing completions count as incorrect unless `exclude_missing`.
AccuracyReport evaluate_tasks(const std::vector<CompletionTask>& tasks,
                              const std::map<std::string, std::string>& completions,
                              Judge judge, const ExternalJudge& external = {},
                              bool exclude_missing = false);

nlohmann::json to_json(const CompletionTask& task);
CompletionTask task_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AccuracyReport& report);
// Throws Error(kConfigError).
AccuracyReport accuracy_from_json(const nlohmann::json& j);

}  // namespace pk

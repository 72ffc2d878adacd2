#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "perturbkit/core/sample.h"

namespace pk {

enum class FilterReason { kTooFewLines, kTooFewChars, kSyntaxInvalid };
std::string_view to_string(FilterReason reason);

struct FilterThresholds {
  std::size_t min_lines = 40;
  std::size_t min_chars = 100;
};

struct FilterVerdict {
  std::string sample_id;
  bool kept = false;
  std::vector<FilterReason> reasons;
  std::vector<std::string> diagnostics;
};

// Physical lines; a final line without a newline counts.
std::size_t count_lines(std::string_view text);
// Unicode code points.
std::size_t count_chars(std::string_view text);

FilterVerdict filter_sample(const CodeSample& sample,
                            const FilterThresholds& thresholds = {});
std::vector<FilterVerdict> filter_corpus(const std::vector<CodeSample>& samples,
                                         const FilterThresholds& thresholds = {});

nlohmann::json to_json(const FilterVerdict& verdict);
// Throws Error(kConfigError).
FilterVerdict verdict_from_json(const nlohmann::json& j);

}  // namespace pk

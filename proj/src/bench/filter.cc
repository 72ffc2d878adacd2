#include "perturbkit/bench/filter.h"

#include <algorithm>

#include "perturbkit/core/error.h"
#include "perturbkit/similarity/similarity.h"
#include "perturbkit/verify/verify.h"

namespace pk {

std::string_view to_string(FilterReason reason) {
  switch (reason) {
    case FilterReason::kTooFewLines: return "TOO_FEW_LINES";
    case FilterReason::kTooFewChars: return "TOO_FEW_CHARS";
    case FilterReason::kSyntaxInvalid: return "SYNTAX_INVALID";
  }
  return "UNKNOWN";
}

std::size_t count_lines(std::string_view text) {
  const auto newlines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  return newlines + (!text.empty() && text.back() != '\n' ? 1 : 0);
}

std::size_t count_chars(std::string_view text) { return decode_utf8(text).size(); }

FilterVerdict filter_sample(const CodeSample& sample,
                            const FilterThresholds& thresholds) {
  FilterVerdict v;
  v.sample_id = sample.id;
  if (count_lines(sample.text) < thresholds.min_lines) {
    v.reasons.push_back(FilterReason::kTooFewLines);
  }
  if (count_chars(sample.text) < thresholds.min_chars) {
    v.reasons.push_back(FilterReason::kTooFewChars);
  }
  const CheckResult syntax = syntax_check(sample);
  if (!syntax.ok) v.reasons.push_back(FilterReason::kSyntaxInvalid);
  v.diagnostics = syntax.diagnostics;
  v.kept = v.reasons.empty();
  return v;
}

std::vector<FilterVerdict> filter_corpus(const std::vector<CodeSample>& samples,
                                         const FilterThresholds& thresholds) {
  std::vector<FilterVerdict> out;
  out.reserve(samples.size());
  for (const CodeSample& s : samples) out.push_back(filter_sample(s, thresholds));
  return out;
}

nlohmann::json to_json(const FilterVerdict& verdict) {
  nlohmann::json reasons = nlohmann::json::array();
  for (FilterReason r : verdict.reasons) reasons.push_back(to_string(r));
  return {{"sample", verdict.sample_id},
          {"kept", verdict.kept},
          {"reasons", reasons},
          {"diagnostics", verdict.diagnostics}};
}

FilterVerdict verdict_from_json(const nlohmann::json& j) {
  try {
    FilterVerdict v;
    v.sample_id = j.at("sample").get<std::string>();
    v.kept = j.at("kept").get<bool>();
    for (const auto& r : j.at("reasons")) {
      const std::string name = r.get<std::string>();
      if (name == to_string(FilterReason::kTooFewLines)) {
        v.reasons.push_back(FilterReason::kTooFewLines);
      } else if (name == to_string(FilterReason::kTooFewChars)) {
        v.reasons.push_back(FilterReason::kTooFewChars);
      } else if (name == to_string(FilterReason::kSyntaxInvalid)) {
        v.reasons.push_back(FilterReason::kSyntaxInvalid);
      } else {
        throw Error(ErrorCode::kConfigError, "unknown filter reason " + name);
      }
    }
    v.diagnostics = j.value("diagnostics", std::vector<std::string>{});
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("verdict record: ") + e.what());
  }
}

}  // namespace pk

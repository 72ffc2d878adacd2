#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "perturbkit/core/language.h"

namespace pk {

enum class MethodCategory {
  kBasic = 0,
  kCondition = 1,
  kLoop = 2,
  kLogic = 3,
  kDecomposition = 4,
  kArithmetic = 5,
};

inline constexpr std::size_t kCategoryCount = 6;

// Table order; also the fixed order used during optimizer initialization.
inline constexpr std::array<MethodCategory, kCategoryCount> kAllCategories = {
    MethodCategory::kBasic,         MethodCategory::kCondition,
    MethodCategory::kLoop,          MethodCategory::kLogic,
    MethodCategory::kDecomposition, MethodCategory::kArithmetic};

constexpr std::size_t index_of(MethodCategory category) {
  return static_cast<std::size_t>(category);
}
MethodCategory category_at(std::size_t index);
std::string_view to_string(MethodCategory category);

enum class EngineKind { kRuleBased, kLlm, kHybrid };

std::string_view to_string(EngineKind kind);
EngineKind parse_engine_kind(std::string_view name);

struct PerturbationMethod {
  std::string id;
  MethodCategory category = MethodCategory::kBasic;
  std::string name;
  std::string description;
  // Languages the built-in rule engine implements this method for. The LLM
  // engine accepts every (method, language) pair.
  std::set<Language> rule_languages;

  bool supported_by(EngineKind kind, Language language) const;
};

class MethodCatalog {
 public:
  explicit MethodCatalog(std::vector<PerturbationMethod> methods);

  const std::vector<PerturbationMethod>& methods() const { return methods_; }
  const std::vector<const PerturbationMethod*>& by_category(
      MethodCategory category) const {
    return by_category_[index_of(category)];
  }
  std::size_t size() const { return methods_.size(); }

  // Throws Error(kUnknownMethod).
  const PerturbationMethod& method_by_id(std::string_view id) const;
  const PerturbationMethod* find(std::string_view id) const;

 private:
  std::vector<PerturbationMethod> methods_;
  std::array<std::vector<const PerturbationMethod*>, kCategoryCount>
      by_category_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// The canonical 26-method catalog.
const MethodCatalog& build_catalog();

inline const PerturbationMethod& method_by_id(const MethodCatalog& catalog,
                                              std::string_view id) {
  return catalog.method_by_id(id);
}

}  // namespace pk

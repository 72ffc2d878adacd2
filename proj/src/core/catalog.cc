#include "perturbkit/core/catalog.h"

#include <algorithm>
#include <cctype>

#include "perturbkit/core/error.h"

namespace pk {

MethodCategory category_at(std::size_t index) {
  if (index >= kCategoryCount) {
    throw Error(ErrorCode::kConfigError,
                "category index out of range: " + std::to_string(index));
  }
  return kAllCategories[index];
}

std::string_view to_string(MethodCategory category) {
  switch (category) {
    case MethodCategory::kBasic: return "basic";
    case MethodCategory::kCondition: return "condition";
    case MethodCategory::kLoop: return "loop";
    case MethodCategory::kLogic: return "logic";
    case MethodCategory::kDecomposition: return "decomposition";
    case MethodCategory::kArithmetic: return "arithmetic";
  }
  return "unknown";
}

std::string_view to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::kRuleBased: return "rule";
    case EngineKind::kLlm: return "llm";
    case EngineKind::kHybrid: return "hybrid";
  }
  return "unknown";
}

EngineKind parse_engine_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "rule" || lower == "rule_based") return EngineKind::kRuleBased;
  if (lower == "llm") return EngineKind::kLlm;
  if (lower == "hybrid") return EngineKind::kHybrid;
  throw Error(ErrorCode::kConfigError,
              "unknown engine '" + std::string(name) +
                  "' (expected rule, llm or hybrid)");
}

bool PerturbationMethod::supported_by(EngineKind kind,
                                      Language language) const {
  switch (kind) {
    case EngineKind::kRuleBased: return rule_languages.contains(language);
    case EngineKind::kLlm:
    case EngineKind::kHybrid: return true;
  }
  return false;
}

MethodCatalog::MethodCatalog(std::vector<PerturbationMethod> methods)
    : methods_(std::move(methods)) {
  for (std::size_t i = 0; i < methods_.size(); ++i) {
    const auto [it, inserted] = index_.emplace(methods_[i].id, i);
    if (!inserted) {
      throw Error(ErrorCode::kConfigError,
                  "duplicate method id '" + methods_[i].id + "'");
    }
  }
  for (const PerturbationMethod& m : methods_) {
    by_category_[index_of(m.category)].push_back(&m);
  }
}

const PerturbationMethod* MethodCatalog::find(std::string_view id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &methods_[it->second];
}

const PerturbationMethod& MethodCatalog::method_by_id(
    std::string_view id) const {
  if (const PerturbationMethod* m = find(id)) return *m;
  throw Error(ErrorCode::kUnknownMethod,
              "no perturbation method with id '" + std::string(id) + "'");
}

namespace {

using L = Language;

const std::set<Language> kAll = {L::kPython, L::kGo, L::kCCpp, L::kJava,
                                  L::kRust};
const std::set<Language> kNone = {};

std::vector<PerturbationMethod> canonical_methods() {
  using C = MethodCategory;
  return {
      // Basic
      {"add_exception", C::kBasic, "Add exception",
       "Wrap code that may fail in an exception-handling block.", kNone},
      {"add_arguments", C::kBasic, "Add arguments",
       "Give a function an additional parameter that never affects its "
       "result.",
       kNone},
      {"change_statement_order", C::kBasic, "Change statement order",
       "Swap two neighbouring statements that share no variables.", kAll},
      {"check_arguments", C::kBasic, "Check arguments",
       "Add a check of whether the function arguments are none/null.", kNone},
      {"insert_junk_function", C::kBasic, "Insert junk function",
       "Add a function that is never called.", kAll},
      {"insert_junk_loop", C::kBasic, "Insert junk loop",
       "Add a loop whose body never executes.", kAll},
      {"insert_variables", C::kBasic, "Insert variables",
       "Declare a variable that is never read.", kAll},
      {"move_assignments", C::kBasic, "Move assignments",
       "Move a direct variable assignment to a different but equivalent "
       "position.",
       kNone},
      {"statement_wrapping", C::kBasic, "Statement wrapping",
       "Enclose a statement in an always-true if or a single-pass for.", kAll},
      {"function_rename", C::kBasic, "Function rename",
       "Give a function a new name and update its uses.", kAll},
      {"variables_rename", C::kBasic, "Variables rename",
       "Give local variables new names and update their uses.", kAll},
      // Condition
      {"add_condition", C::kCondition, "Add condition",
       "Complete an if statement with an explicit empty else branch.", kAll},
      {"div_if_else", C::kCondition, "Div if else",
       "Turn an if / else-if / else chain into an if whose else branch "
       "holds a nested if / else.",
       kAll},
      {"div_composed_if", C::kCondition, "Div composed if",
       "Split an if with a compound and/or condition into single-condition "
       "ifs.",
       kAll},
      {"if_continue_to_if_else", C::kCondition, "If-continue to if-else",
       "Replace an if-continue guard in a loop with an if-else around the "
       "rest of the loop body.",
       kAll},
      {"if_to_switch", C::kCondition, "If to switch/match",
       "Rewrite an if chain as a switch (Go, Java, C family) or match "
       "(Rust, Python) statement.",
       kNone},
      {"switch_to_if", C::kCondition, "Switch/match to if",
       "Rewrite a switch or match statement as an if chain.", kNone},
      // Loop
      {"div_loop", C::kLoop, "Div loop",
       "Split one loop into several loops over parts of the range.", kNone},
      {"for_while_transformation", C::kLoop, "For/while transformation",
       "Turn a for loop into a while loop or a while loop into a for loop.",
       kAll},
      // Logic
      {"equi_boolean_logic", C::kLogic, "Equi boolean logic",
       "Rewrite a boolean condition into a logically equivalent form.", kAll},
      {"swap_boolean_expression", C::kLogic, "Swap boolean expression",
       "Exchange the operands of a comparison and mirror its operator.",
       kAll},
      // Decomposition
      {"extract_if", C::kDecomposition, "Extract if",
       "Move an if condition into a new predicate function and call it.",
       {L::kPython, L::kGo, L::kCCpp, L::kRust}},
      {"extract_arithmetic", C::kDecomposition, "Extract arithmetic",
       "Move an arithmetic expression into a new function and call it.",
       {L::kPython, L::kCCpp}},
      // Arithmetic
      {"equi_arithmetic_expression", C::kArithmetic,
       "Equi arithmetic expression",
       "Rewrite an arithmetic computation into an equivalent form.", kAll},
      {"expression_div", C::kArithmetic, "Expression div",
       "Break a long expression into several smaller ones held in "
       "temporaries.",
       kNone},
      {"modify_operations", C::kArithmetic, "Modify operations",
       "Expand a compound assignment such as a += b into a = a + b.", kAll},
  };
}

}  // namespace

const MethodCatalog& build_catalog() {
  static const MethodCatalog catalog(canonical_methods());
  return catalog;
}

}  // namespace pk

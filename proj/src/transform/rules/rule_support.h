#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "perturbkit/core/error.h"
#include "perturbkit/core/rng.h"
#include "perturbkit/core/sample.h"
#include "perturbkit/source/expr.h"
#include "perturbkit/source/structure.h"

namespace pk::rules {

using source::Clause;
using source::ClauseKind;
using source::Expr;
using source::ExprKind;
using source::Function;
using source::kNone;
using source::SourceModel;
using source::Stmt;
using source::StmtKind;
using source::Token;
using source::TokenKind;

struct Edit {
  std::size_t begin = 0;  // byte range [begin, end) replaced by text
  std::size_t end = 0;
  std::string text;
};

// Applies non-overlapping edits. Throws Error(kEngineFailure) on overlap.
std::string apply_edits(std::string_view text, std::vector<Edit> edits);

struct RuleInput {
  const CodeSample& sample;
  const SourceModel& model;
  Rng& rng;
};

struct RuleOutput {
  std::string text;
  std::string entry_point;
  std::map<std::string, std::string> renames;
  std::string note;
};

using RuleFn = std::function<RuleOutput(const RuleInput&)>;

[[noreturn]] void not_applicable(const std::string& why);

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng, const char* what) {
  if (items.empty()) not_applicable(std::string("no ") + what + " found");
  return items[rng.uniform_index(items.size())];
}
template <typename T>
const T& pick(std::vector<T>&& items, Rng& rng, const char* what) = delete;

// Fresh identifiers that collide with nothing in the file.
class NamePool {
 public:
  explicit NamePool(const SourceModel& model);

  // kind: "var", "func", "pred", "iter"
  std::string fresh(std::string_view kind, Rng& rng);
  bool taken(const std::string& name) const;

 private:
  std::set<std::string> used_;
  Language language_;
};

// Name of the function enclosing token `tok`, or "<module>".
std::string entry_name(const SourceModel& model, std::size_t tok);

// A statement that can take code inserted before it, or be wrapped.
struct StmtSite {
  const Stmt* stmt = nullptr;
  const std::vector<Stmt>* block = nullptr;
  std::size_t index = 0;
  const Function* function = nullptr;  // nullptr at Python module level
  bool in_loop = false;
};

struct SiteOptions {
  bool include_module = false;  // Python module-level statements
  bool need_line_start = true;
};

// Statements in properly delimited statement lists (function bodies, braced
// or indented blocks), skipping opaque bodies, labels and cases.
std::vector<StmtSite> statement_sites(const SourceModel& model,
                                      const SiteOptions& options = {});

// Every statement with its enclosing function.
void visit_statements(
    const SourceModel& model, bool include_module,
    const std::function<void(const Stmt&, const Function*)>& visit);

// True if the function contains goto or labels (C, C++, Go).
bool has_jumps(const SourceModel& model, const Function& fn);
bool has_labels_in(const SourceModel& model, std::size_t begin,
                   std::size_t end);

// True for Python statements in a class body (no enclosing function
// between them and the class).
bool python_in_class_body(const SourceModel& model, const StmtSite& site);

bool is_docstring(const SourceModel& model, const StmtSite& site);

// Token range helpers.
bool range_has(const SourceModel& model, std::size_t begin, std::size_t end,
               std::string_view text);
bool range_has_word(const SourceModel& model, std::size_t begin,
                    std::size_t end, std::string_view word);

// True if `word` occurs as a whole word inside text.
bool contains_word(std::string_view text, std::string_view word);

// Indentation (leading whitespace) of the line where the statement starts.
std::string indent_of(const SourceModel& model, const Stmt& stmt);

// Adds `prefix` to every line after the first in bytes [begin, end), except
// lines starting inside multi-line strings and blank lines.
std::string indent_following(const SourceModel& model, std::size_t begin,
                             std::size_t end, std::string_view prefix);

// Byte just past the last token of an if-like statement's last clause
// (excludes a trailing Rust `;`).
std::size_t clause_chain_end(const SourceModel& model, const Stmt& stmt);

// Condition text literals per language.
std::string true_literal(const SourceModel& model);
std::string not_wrap(const SourceModel& model, const std::string& inner);

// Python: true if `name` is rebound anywhere in the file (assignment,
// def/class, import, parameter, loop target).
bool python_binds_name(const SourceModel& model, std::string_view name);

// Splits a token range into maximal candidate expression segments, also
// descending into bracket groups. Segments never include separators.
struct Segment {
  std::size_t begin;
  std::size_t end;
  int depth;  // bracket nesting below the statement
};
std::vector<Segment> expression_segments(const SourceModel& model,
                                         std::size_t begin, std::size_t end);

// Per-method rule functions.
RuleOutput function_rename(const RuleInput& in);
RuleOutput variables_rename(const RuleInput& in);
RuleOutput insert_junk_loop(const RuleInput& in);
RuleOutput insert_variables(const RuleInput& in);
RuleOutput insert_junk_function(const RuleInput& in);
RuleOutput statement_wrapping(const RuleInput& in);
RuleOutput change_statement_order(const RuleInput& in);
RuleOutput add_condition(const RuleInput& in);
RuleOutput div_if_else(const RuleInput& in);
RuleOutput div_composed_if(const RuleInput& in);
RuleOutput if_continue_to_if_else(const RuleInput& in);
RuleOutput for_while_transformation(const RuleInput& in);
RuleOutput extract_if(const RuleInput& in);
RuleOutput extract_arithmetic(const RuleInput& in);
RuleOutput swap_boolean_expression(const RuleInput& in);
RuleOutput equi_boolean_logic(const RuleInput& in);
RuleOutput equi_arithmetic_expression(const RuleInput& in);
RuleOutput modify_operations(const RuleInput& in);

}  // namespace pk::rules

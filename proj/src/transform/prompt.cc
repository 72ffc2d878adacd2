#include "perturbkit/transform/prompt.h"

#include <map>

#include "json.hpp"
#include "perturbkit/core/error.h"

namespace pk {

namespace {

struct Template {
  const char* prerequisites;
  const char* requirements;
  const char* format;
  const char* example;  // may be empty
};

// Per-method task text. `{branch}` becomes switch or match.
const std::map<std::string, Template>& templates() {
  static const std::map<std::string, Template> t = {
      {"add_exception",
       {"The code contains an operation that can fail at run time, such as "
        "indexing, parsing, division or I/O.",
        "Wrap one such operation in the language's error-handling construct. "
        "The handler must re-raise or reproduce the original failure so that "
        "observable behaviour, including output and exit status, is unchanged.",
        "<stmt> => <try> { <stmt> } <handler>(<error>) { <rethrow> }",
        ""}},
      {"add_arguments",
       {"The target function has a parameter list that can be extended.",
        "Add one new parameter to the target function and pass a value for it "
        "at every call site. The new parameter must not influence the result. "
        "Do not give the new parameter a default value unless the current last "
        "parameter already has a default value.",
        "f(<a>, <b>) => f(<a>, <b>, <extra>) and f(x, y) => f(x, y, <value>)",
        ""}},
      {"change_statement_order",
       {"Two neighbouring statements do not depend on each other.",
        "Swap the two statements. Only swap statements that share no variables "
        "and have no side effects that could observe each other.",
        "<s1>; <s2> => <s2>; <s1>",
        "a = 1\nb = 2  =>  b = 2\na = 1"}},
      {"check_arguments",
       {"The target function takes at least one parameter that could be "
        "none/null.",
        "At the start of the target function, add a check for whether the "
        "arguments are none/null. The check must not change behaviour for "
        "every input the program actually receives.",
        "f(<p>) { <body> } => f(<p>) { if <p> is null: <fail>; <body> }",
        ""}},
      {"insert_junk_function",
       {"None.",
        "Add a new function with a fresh name that is never called. It must "
        "compile and must not change any existing code.",
        "<code> => <code> + def <fresh>(...) { ... }",
        ""}},
      {"insert_junk_loop",
       {"The target function has a statement block.",
        "Insert a loop whose body can never execute (for example a loop over an "
        "empty range). Use fresh names only.",
        "<stmt> => for <fresh> in <empty> { ... } <stmt>",
        "for i in range(0):\n    pass"}},
      {"insert_variables",
       {"The target function has a statement block.",
        "Declare a new variable with a fresh name that is never read.",
        "<stmt> => <fresh> = <literal>; <stmt>",
        ""}},
      {"move_assignments",
       {"The target function contains a direct assignment whose position can "
        "change without affecting its uses.",
        "Move one direct variable assignment to a different position where it "
        "is still evaluated before every use and after every value it reads "
        "is ready.",
        "x = <e>; <s>; use(x) => <s>; x = <e>; use(x)",
        ""}},
      {"statement_wrapping",
       {"The target function has a statement that can be enclosed without "
        "changing scoping.",
        "Enclose one statement in an if whose condition is always true, or in "
        "a loop that runs exactly once.",
        "<stmt> => if <true> { <stmt> }",
        ""}},
      {"function_rename",
       {"The code defines a function that is only used inside this file.",
        "Give the target function a new, meaningful name and update every call. "
        "Do not rename functions from other files or libraries.",
        "def f(...) ... f(...) => def <new>(...) ... <new>(...)",
        ""}},
      {"variables_rename",
       {"The target function has local variables.",
        "Give local variables new, meaningful names and update all their uses "
        "consistently. Do not rename fields, globals or names from libraries.",
        "<x> = ...; use(<x>) => <new> = ...; use(<new>)",
        ""}},
      {"add_condition",
       {"The code has an if statement without an else branch.",
        "Add an explicit else branch that does nothing.",
        "if <c> { <s> } => if <c> { <s> } else { }",
        ""}},
      {"div_if_else",
       {"The code has an if / else-if / else chain.",
        "Turn the else-if part into an else branch that contains a nested "
        "if / else.",
        "if <a> {A} else if <b> {B} else {C} => if <a> {A} else { if <b> {B} else {C} }",
        ""}},
      {"div_composed_if",
       {"The code has an if whose condition combines parts with and/or.",
        "Split the compound condition into separate single-condition if "
        "statements with the same behaviour, keeping short-circuit order.",
        "if <a> and <b> {S} => if <a> { if <b> {S} }",
        ""}},
      {"if_continue_to_if_else",
       {"A loop body contains an if statement whose branch ends with continue.",
        "Remove the continue and move the rest of the loop body into an else "
        "branch of that if.",
        "if <c> { continue } <rest> => if <c> { } else { <rest> }",
        ""}},
      {"if_to_switch",
       {"The code has an if chain that compares one value against constants.",
        "Rewrite the if chain as a {branch} statement with the same behaviour.",
        "if x == 1 {A} else if x == 2 {B} else {C} => {branch} x { 1: A; 2: B; default: C }",
        ""}},
      {"switch_to_if",
       {"The code has a {branch} statement.",
        "Rewrite the {branch} statement as an equivalent if chain.",
        "{branch} x { 1: A; default: B } => if x == 1 {A} else {B}",
        ""}},
      {"div_loop",
       {"The code has a loop over a range whose iterations are independent of "
        "the order in which range parts run.",
        "Split the loop into several loops that together cover the same range "
        "in the same order.",
        "for i in [0, n) {S} => for i in [0, k) {S}; for i in [k, n) {S}",
        ""}},
      {"for_while_transformation",
       {"The code has a for or while loop.",
        "Turn a for loop into an equivalent while loop, or a while loop into an "
        "equivalent for loop.",
        "for (<init>; <cond>; <step>) {S} => <init>; while (<cond>) { S; <step> }",
        ""}},
      {"equi_boolean_logic",
       {"The code has a boolean condition.",
        "Rewrite the condition into a logically equivalent form, for example "
        "with De Morgan's laws.",
        "<a> and <b> => not (not <a> or not <b>)",
        ""}},
      {"swap_boolean_expression",
       {"The code has a comparison.",
        "Swap the two sides of the comparison and mirror its operator.",
        "<a> < <b> => <b> > <a>",
        "if a < b or c < d  =>  if b > a or d > c"}},
      {"extract_if",
       {"The code has an if statement.",
        "Move the if condition into a new predicate function with a fresh name "
        "that returns the condition's value, and call it in the if.",
        "if <c> {S} => def <p>(): return <c>; if <p>() {S}",
        ""}},
      {"extract_arithmetic",
       {"The code has an arithmetic expression.",
        "Move the arithmetic expression into a new function with a fresh name "
        "and call it where the expression was.",
        "x = <a> + <b> => def <g>(): return <a> + <b>; x = <g>()",
        ""}},
      {"equi_arithmetic_expression",
       {"The code has an arithmetic computation.",
        "Rewrite the computation into an equivalent form with the same result "
        "for every input, including overflow and rounding behaviour.",
        "<x> - <k> => <x> + (-<k>)",
        ""}},
      {"expression_div",
       {"The code has a long expression.",
        "Break the expression into several smaller ones held in new temporary "
        "variables with fresh names, preserving evaluation order.",
        "r = <a> * <b> + <c> => t = <a> * <b>; r = t + <c>",
        ""}},
      {"modify_operations",
       {"The code has a compound assignment.",
        "Expand a compound assignment into a plain assignment of the full "
        "expression.",
        "<a> += <b> => <a> = <a> + <b>",
        "total += x  =>  total = total + x"}},
  };
  return t;
}

std::string substitute(std::string text, const std::string& branch) {
  for (std::size_t p = text.find("{branch}"); p != std::string::npos;
       p = text.find("{branch}", p)) {
    text.replace(p, 8, branch);
  }
  return text;
}

}  // namespace

PromptBundle synthesize_prompt(const CodeSample& sample,
                               const PerturbationMethod& method) {
  const auto it = templates().find(method.id);
  if (it == templates().end()) {
    throw Error(ErrorCode::kUnknownMethod, "no prompt template for " + method.id);
  }
  const Template& t = it->second;
  const std::string lang = language_name(sample);
  const std::string branch =
      sample.language == Language::kRust || sample.language == Language::kPython ? "match"
                                                                                 : "switch";
  PromptBundle b;
  b.role = "You are an expert " + lang +
           " programmer who rewrites code without changing what it does.";
  b.task.prerequisites = substitute(t.prerequisites, branch);
  b.task.requirements =
      substitute(t.requirements, branch) +
      " Keep the program's behaviour identical: same output for every input. "
      "Do not modify imports or any code from other files, and keep the code "
      "compilable. Apply only the \"" + method.name + "\" rewrite.";
  b.task.format_template = substitute(t.format, branch);
  if (*t.example) b.task.example = t.example;
  b.code.full_source = sample.text;
  b.code.entry_point = "<module>";
  b.answer_instructions =
      "Return the complete modified code and the entry point (the name of the "
      "function you changed) as a JSON object: {\"code\": \"...\", "
      "\"entry_point\": \"...\"}. Return only that object.";
  return b;
}

ChatRequest render_request(const PromptBundle& bundle, const std::string& model,
                           double temperature) {
  std::string user = "Task: " + bundle.task.requirements + "\n\nPrerequisites: " +
                     bundle.task.prerequisites + "\n\nFormat: " + bundle.task.format_template;
  if (bundle.task.example) user += "\n\nExample:\n" + *bundle.task.example;
  user += "\n\nTarget function: " + bundle.code.entry_point + "\n\nCode:\n```\n" +
          bundle.code.full_source + "\n```\n\n" + bundle.answer_instructions;
  ChatRequest r;
  r.model = model;
  r.temperature = temperature;
  r.messages = {{"system", bundle.role}, {"user", std::move(user)}};
  return r;
}

namespace {

std::optional<LlmAnswer> from_json(const nlohmann::json& j) {
  if (!j.is_object()) return std::nullopt;
  const auto c = j.find("code");
  const auto e = j.find("entry_point");
  if (c == j.end() || e == j.end() || !c->is_string() || !e->is_string()) {
    return std::nullopt;
  }
  return LlmAnswer{c->get<std::string>(), e->get<std::string>()};
}

}  // namespace

LlmAnswer parse_llm_answer(const std::string& raw) {
  // Try every balanced {...} candidate, outermost first.
  for (std::size_t start = raw.find('{'); start != std::string::npos;
       start = raw.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escape = false;
    for (std::size_t i = start; i < raw.size(); ++i) {
      const char ch = raw[i];
      if (in_string) {
        if (escape) escape = false;
        else if (ch == '\\') escape = true;
        else if (ch == '"') in_string = false;
        continue;
      }
      if (ch == '"') in_string = true;
      else if (ch == '{') ++depth;
      else if (ch == '}' && --depth == 0) {
        const auto j = nlohmann::json::parse(raw.substr(start, i - start + 1), nullptr, false);
        if (!j.is_discarded()) {
          if (auto a = from_json(j)) return *a;
        }
        break;
      }
    }
  }
  throw Error(ErrorCode::kMalformedAnswer,
              "reply lacks a {\"code\", \"entry_point\"} object: " + raw);
}

}  // namespace pk

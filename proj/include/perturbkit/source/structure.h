#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "perturbkit/core/language.h"
#include "perturbkit/source/lexer.h"

namespace pk::source {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

enum class StmtKind {
  kSimple,
  kIf,
  kFor,
  kWhile,
  kDoWhile,
  kLoop,     // Rust `loop`
  kSwitch,   // switch / match / select; body is kept opaque
  kTry,
  kBlock,    // bare `{ ... }` or Rust `unsafe { ... }`
  kLabel,    // `name:` on its own (body statement follows separately)
  kCase,     // `case x:` / `default:` inside a parsed body
  kCompound, // any other statement with a nested body (def, class, with, ...)
};

enum class ClauseKind { kIf, kElif, kElse, kBody, kExcept, kFinally };

struct Stmt;

// One arm of a compound statement. Token indices refer to the lexed stream.
struct Clause {
  ClauseKind kind = ClauseKind::kBody;
  std::size_t keyword = kNone;  // first token of the arm (`if`, `elif`, `else`)
  std::size_t head_begin = kNone;  // header tokens (condition, loop header)
  std::size_t head_end = kNone;    // exclusive; excludes C-style parens
  std::size_t open = kNone;   // `{` (brace languages) or `:` (Python)
  std::size_t close = kNone;  // `}`; kNone for Python and unbraced bodies
  std::vector<Stmt> body;
  bool opaque = false;  // body statements were not parsed
  bool inline_body = false;  // Python: body on the header line
};

struct Stmt {
  StmtKind kind = StmtKind::kSimple;
  std::size_t begin = 0;  // token range [begin, end)
  std::size_t end = 0;
  std::vector<Clause> clauses;
  int indent = 0;       // Python: indentation width of the first line
  bool tail = false;    // Rust: trailing expression without `;`
};

struct Function {
  std::string name;
  std::size_t name_tok = kNone;
  std::size_t decl_begin = kNone;   // first token including modifiers
  std::size_t params_open = kNone;  // `(`
  std::size_t params_close = kNone; // `)`
  std::size_t body_open = kNone;    // `{` or Python `:`
  std::size_t body_close = kNone;   // `}`; kNone for Python
  std::size_t end = 0;              // token index after the definition
  std::vector<Stmt> body;
  bool is_method = false;  // defined in a class/impl or with a Go receiver
  bool is_public = false;  // exported or externally visible by declaration
  int indent = 0;          // Python: indentation of the `def` line
};

// Lexed and structurally parsed source file.
class SourceModel {
 public:
  // Throws Error(kLexError) or Error(kParseError).
  SourceModel(std::string text, Language language, CDialect dialect = CDialect::kC);

  const std::string& text() const { return text_; }
  Language language() const { return language_; }
  CDialect dialect() const { return dialect_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const Token& tok(std::size_t i) const { return tokens_[i]; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<Stmt>& top_level() const { return top_; }
  const std::vector<Function>& functions() const { return functions_; }

  // Index of the bracket matching the one at `i`.
  std::size_t match(std::size_t i) const { return match_[i]; }

  // Byte offsets.
  std::size_t byte_begin(std::size_t tok) const;
  std::size_t byte_end(std::size_t tok_exclusive_end) const;
  // Start of the physical line holding byte `pos`.
  std::size_t line_start(std::size_t pos) const;
  // Leading whitespace of that physical line.
  std::string line_indent(std::size_t pos) const;
  // True if only whitespace precedes `tok` on its physical line.
  bool starts_line(std::size_t tok) const;
  // Text of tokens [begin, end) as in the source.
  std::string slice(std::size_t begin, std::size_t end) const;

  // Indentation unit used by the file (detected; defaults to 4 spaces).
  const std::string& indent_unit() const { return indent_unit_; }

  // Innermost function containing token i, or nullptr.
  const Function* function_at(std::size_t tok) const;

 private:
  void build_python();
  void build_braces();

  std::string text_;
  Language language_;
  CDialect dialect_;
  std::vector<Token> tokens_;
  std::vector<std::size_t> match_;
  std::vector<Stmt> top_;
  std::vector<Function> functions_;
  std::string indent_unit_ = "    ";
};

// Visits every statement (pre-order), including nested bodies.
template <typename F>
void for_each_stmt(const std::vector<Stmt>& stmts, F&& f) {
  for (const Stmt& s : stmts) {
    f(s);
    for (const Clause& c : s.clauses) for_each_stmt(c.body, f);
  }
}

// Visits every statement list (function bodies and nested blocks).
template <typename F>
void for_each_block(const std::vector<Stmt>& stmts, F&& f) {
  f(stmts);
  for (const Stmt& s : stmts) {
    for (const Clause& c : s.clauses) {
      if (!c.opaque) for_each_block(c.body, f);
    }
  }
}

// Adds `prefix` to the start of every physical line overlapping bytes
// [begin, end), except lines that start inside a multi-line string token.
std::string indent_lines(const SourceModel& model, std::size_t begin,
                         std::size_t end, std::string_view prefix);

}  // namespace pk::source

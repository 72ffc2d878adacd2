#include "perturbkit/source/lexer.h"

#include <algorithm>
#include <array>
#include <set>

#include "perturbkit/core/error.h"

namespace pk::source {

namespace {

using Set = std::set<std::string, std::less<>>;

const Set& keywords_for(Language language) {
  static const Set kPython = {
      "False", "None",   "True",    "and",      "as",     "assert", "async",
      "await", "break",  "class",   "continue", "def",    "del",    "elif",
      "else",  "except", "finally", "for",      "from",   "global", "if",
      "import", "in",    "is",      "lambda",   "nonlocal", "not",  "or",
      "pass",  "raise",  "return",  "try",      "while",  "with",   "yield"};
  static const Set kGo = {
      "break",  "case",   "chan",      "const",       "continue", "default",
      "defer",  "else",   "fallthrough", "for",       "func",     "go",
      "goto",   "if",     "import",    "interface",   "map",      "package",
      "range",  "return", "select",    "struct",      "switch",   "type",
      "var"};
  static const Set kC = {
      "alignas",   "alignof",     "asm",          "auto",       "bool",
      "break",     "case",        "catch",        "char",       "char16_t",
      "char32_t",  "char8_t",     "class",        "const",      "consteval",
      "constexpr", "constinit",   "const_cast",   "continue",   "decltype",
      "default",   "delete",      "do",           "double",     "dynamic_cast",
      "else",      "enum",        "explicit",     "export",     "extern",
      "false",     "float",       "for",          "friend",     "goto",
      "if",        "inline",      "int",          "long",       "mutable",
      "namespace", "new",         "noexcept",     "nullptr",    "operator",
      "private",   "protected",   "public",       "register",   "reinterpret_cast",
      "restrict",  "return",      "short",        "signed",     "sizeof",
      "static",    "static_assert", "static_cast", "struct",    "switch",
      "template",  "this",        "thread_local", "throw",      "true",
      "try",       "typedef",     "typeid",       "typename",   "union",
      "unsigned",  "using",       "virtual",      "void",       "volatile",
      "wchar_t",   "while",       "_Bool",        "_Complex",   "_Static_assert"};
  static const Set kJava = {
      "abstract", "assert",     "boolean",   "break",     "byte",
      "case",     "catch",      "char",      "class",     "const",
      "continue", "default",    "do",        "double",    "else",
      "enum",     "extends",    "final",     "finally",   "float",
      "for",      "goto",       "if",        "implements", "import",
      "instanceof", "int",      "interface", "long",      "native",
      "new",      "package",    "private",   "protected", "public",
      "return",   "short",      "static",    "strictfp",  "super",
      "switch",   "synchronized", "this",    "throw",     "throws",
      "transient", "try",       "void",      "volatile",  "while",
      "true",     "false",      "null",      "var"};
  static const Set kRust = {
      "as",     "async", "await",  "break",  "const",  "continue", "crate",
      "dyn",    "else",  "enum",   "extern", "false",  "fn",       "for",
      "if",     "impl",  "in",     "let",    "loop",   "match",    "mod",
      "move",   "mut",   "pub",    "ref",    "return", "self",     "Self",
      "static", "struct", "super", "trait",  "true",   "type",     "unsafe",
      "use",    "where", "while",  "yield"};
  switch (language) {
    case Language::kPython: return kPython;
    case Language::kGo: return kGo;
    case Language::kCCpp: return kC;
    case Language::kJava: return kJava;
    case Language::kRust: return kRust;
  }
  return kPython;
}

const std::vector<std::string_view>& operators_for(Language language) {
  // Longest first within each list.
  static const std::vector<std::string_view> kPython = {
      "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>",
      "<=",  ">=",  "==",  "!=",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=",
      "^=",  "@=",  "+",   "-",   "*",   "/",  "%",  "@",  "&",  "|",  "^",
      "~",   "<",   ">",   "(",   ")",   "[",  "]",  "{",  "}",  ",",  ":",
      ".",   ";",   "="};
  static const std::vector<std::string_view> kGo = {
      "&^=", "<<=", ">>=", "...", "&&", "||", "<-", "++", "--", "==", "!=",
      "<=",  ">=",  ":=",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=",
      "<<",  ">>",  "&^",  "+",   "-",  "*",  "/",  "%",  "&",  "|",  "^",
      "<",   ">",   "=",   "!",   "(",  ")",  "[",  "]",  "{",  "}",  ",",
      ";",   ".",   ":",   "~"};
  static const std::vector<std::string_view> kC = {
      "<<=", ">>=", "->*", "...", "<=>", "::", "->", "++", "--", "<<", ">>",
      "<=",  ">=",  "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=", "%=",
      "&=",  "|=",  "^=",  ".*",  "##",  "+",  "-",  "*",  "/",  "%",  "&",
      "|",   "^",   "~",   "!",   "<",   ">",  "=",  "(",  ")",  "[",  "]",
      "{",   "}",   ",",   ";",   ":",   ".",  "?",  "#"};
  static const std::vector<std::string_view> kJava = {
      ">>>=", "<<=", ">>=", ">>>", "...", "::", "->", "++", "--", "<<", ">>",
      "<=",   ">=",  "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=", "%=",
      "&=",   "|=",  "^=",  "+",   "-",   "*",  "/",  "%",  "&",  "|",  "^",
      "~",    "!",   "<",   ">",   "=",   "(",  ")",  "[",  "]",  "{",  "}",
      ",",    ";",   ":",   ".",   "?",   "@"};
  static const std::vector<std::string_view> kRust = {
      "<<=", ">>=", "...", "..=", "::", "->", "=>", "..", "<<", ">>", "<=",
      ">=",  "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=", "%=", "&=",
      "|=",  "^=",  "+",   "-",   "*",  "/",  "%",  "&",  "|",  "^",  "!",
      "<",   ">",   "=",   "(",   ")",  "[",  "]",  "{",  "}",  ",",  ";",
      ":",   ".",   "?",   "@",   "#",  "$",  "~"};
  switch (language) {
    case Language::kPython: return kPython;
    case Language::kGo: return kGo;
    case Language::kCCpp: return kC;
    case Language::kJava: return kJava;
    case Language::kRust: return kRust;
  }
  return kPython;
}

bool ident_start(unsigned char c, Language language) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80 || (language == Language::kJava && c == '$');
}

bool ident_char(unsigned char c, Language language) {
  return ident_start(c, language) || (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view text, Language language)
      : text_(text), lang_(language) {}

  std::vector<Token> run() {
    while (pos_ < text_.size()) {
      const unsigned char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        pending_newline_ = true;
        at_line_start_ = true;
        ++pos_;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
        continue;
      }
      if (c == '\\' && continuation_at(pos_)) {
        pos_ += text_[pos_ + 1] == '\r' ? 3 : 2;
        ++line_;
        continue;
      }
      if (try_comment()) continue;
      if (lang_ == Language::kCCpp && c == '#' && at_line_start_) {
        lex_preprocessor();
        continue;
      }
      at_line_start_ = false;
      if (try_string_or_prefixed()) continue;
      if (ident_start(c, lang_)) {
        lex_identifier();
        continue;
      }
      if (is_digit(c) || (c == '.' && pos_ + 1 < text_.size() &&
                          is_digit(text_[pos_ + 1]) &&
                          lang_ != Language::kRust)) {
        lex_number();
        continue;
      }
      if (c == '"' || (c == '\'' && lang_ != Language::kRust) ||
          (c == '`' && lang_ == Language::kGo)) {
        lex_quoted(pos_, pos_);
        continue;
      }
      if (c == '\'' && lang_ == Language::kRust) {
        lex_rust_quote();
        continue;
      }
      lex_operator();
    }
    return std::move(tokens_);
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw Error(ErrorCode::kLexError, what, at);
  }

  bool continuation_at(std::size_t p) const {
    if (p + 1 >= text_.size()) return false;
    if (text_[p + 1] == '\n') return true;
    return text_[p + 1] == '\r' && p + 2 < text_.size() &&
           text_[p + 2] == '\n';
  }

  void push(TokenKind kind, std::size_t begin, std::size_t end) {
    Token t;
    t.kind = kind;
    t.text = std::string(text_.substr(begin, end - begin));
    t.begin = begin;
    t.end = end;
    t.line = token_line_;
    t.line_start = pending_newline_;
    pending_newline_ = false;
    tokens_.push_back(std::move(t));
  }

  void mark_start() { token_line_ = line_; }

  // Advances pos_ to `to`, counting line breaks on the way.
  void advance_to(std::size_t to) {
    for (std::size_t i = pos_; i < to; ++i) {
      if (text_[i] == '\n') ++line_;
    }
    pos_ = to;
  }

  bool try_comment() {
    const char c = text_[pos_];
    if (lang_ == Language::kPython) {
      if (c != '#') return false;
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      return true;
    }
    if (c != '/' || pos_ + 1 >= text_.size()) return false;
    const char d = text_[pos_ + 1];
    if (d == '/') {
      while (pos_ < text_.size() && text_[pos_] != '\n') {
        // A line comment ending in a backslash continues in C.
        if (lang_ == Language::kCCpp && text_[pos_] == '\\' &&
            continuation_at(pos_)) {
          ++line_;
          pos_ += text_[pos_ + 1] == '\r' ? 3 : 2;
          continue;
        }
        ++pos_;
      }
      return true;
    }
    if (d == '*') {
      const std::size_t start = pos_;
      pos_ += 2;
      int depth = 1;
      while (pos_ < text_.size()) {
        if (text_[pos_] == '\n') {
          ++line_;
          pending_newline_ = true;
        }
        if (text_.compare(pos_, 2, "*/") == 0) {
          pos_ += 2;
          if (--depth == 0) return true;
          continue;
        }
        if (lang_ == Language::kRust && text_.compare(pos_, 2, "/*") == 0) {
          ++depth;
          pos_ += 2;
          continue;
        }
        ++pos_;
      }
      fail("unterminated block comment", start);
    }
    return false;
  }

  void lex_preprocessor() {
    mark_start();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\n') {
      if (text_[pos_] == '\\' && continuation_at(pos_)) {
        pos_ += text_[pos_ + 1] == '\r' ? 3 : 2;
        ++line_;
        continue;
      }
      if (text_.compare(pos_, 2, "/*") == 0) {
        const std::size_t close = text_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) {
          fail("unterminated block comment", pos_);
        }
        advance_to(close + 2);
        continue;
      }
      ++pos_;
    }
    std::size_t end = pos_;
    while (end > start && (text_[end - 1] == ' ' || text_[end - 1] == '\t' ||
                           text_[end - 1] == '\r')) {
      --end;
    }
    push(TokenKind::kPreprocessor, start, end);
  }

  void lex_identifier() {
    mark_start();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_], lang_)) ++pos_;
    const std::string_view word = text_.substr(start, pos_ - start);
    push(is_keyword(word, lang_) ? TokenKind::kKeyword
                                 : TokenKind::kIdentifier,
         start, pos_);
  }

  // String prefixes: Python r/b/u/f combinations, C/C++ L/u/U/u8/R, Rust
  // r#"..."#, b"...", b'x', br"...".
  bool try_string_or_prefixed() {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    while (p < text_.size() && p - start < 3 &&
           ((text_[p] >= 'a' && text_[p] <= 'z') ||
            (text_[p] >= 'A' && text_[p] <= 'Z') || text_[p] == '8')) {
      ++p;
    }
    if (p == start) return false;
    // Try every prefix length that ends right before a quote (or '#').
    for (std::size_t len = p - start; len >= 1; --len) {
      const std::size_t q = start + len;
      if (q >= text_.size()) continue;
      std::string prefix(text_.substr(start, len));
      std::string lower = prefix;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char ch) { return std::tolower(ch); });
      const char qc = text_[q];
      switch (lang_) {
        case Language::kPython: {
          static const Set kPrefixes = {"r",  "u",  "b",  "f",  "br",
                                        "rb", "fr", "rf", "t",  "tr", "rt"};
          if ((qc == '"' || qc == '\'') && kPrefixes.contains(lower)) {
            mark_start();
            lex_quoted(start, q, lower.find('r') != std::string::npos);
            return true;
          }
          break;
        }
        case Language::kCCpp: {
          static const Set kPrefixes = {"L", "u", "U", "u8"};
          static const Set kRawPrefixes = {"R", "LR", "uR", "UR", "u8R"};
          if (qc == '"' && kRawPrefixes.contains(prefix)) {
            mark_start();
            lex_cpp_raw(start, q);
            return true;
          }
          if ((qc == '"' || qc == '\'') && kPrefixes.contains(prefix)) {
            mark_start();
            lex_quoted(start, q);
            return true;
          }
          break;
        }
        case Language::kRust: {
          if ((prefix == "r" || prefix == "br") && (qc == '"' || qc == '#')) {
            if (qc == '#' && !rust_raw_string_ahead(q)) break;
            mark_start();
            lex_rust_raw(start, q);
            return true;
          }
          if (prefix == "b" && (qc == '"' || qc == '\'')) {
            mark_start();
            lex_quoted(start, q);
            return true;
          }
          break;
        }
        default:
          break;
      }
    }
    return false;
  }

  bool rust_raw_string_ahead(std::size_t p) const {
    while (p < text_.size() && text_[p] == '#') ++p;
    return p < text_.size() && text_[p] == '"';
  }

  void lex_cpp_raw(std::size_t start, std::size_t quote) {
    const std::size_t open = text_.find('(', quote + 1);
    if (open == std::string_view::npos) fail("bad raw string", start);
    const std::string delim =
        ")" + std::string(text_.substr(quote + 1, open - quote - 1)) + "\"";
    const std::size_t close = text_.find(delim, open + 1);
    if (close == std::string_view::npos) {
      fail("unterminated raw string", start);
    }
    pos_ = start;
    advance_to(close + delim.size());
    push(TokenKind::kString, start, pos_);
  }

  void lex_rust_raw(std::size_t start, std::size_t p) {
    std::size_t hashes = 0;
    while (p < text_.size() && text_[p] == '#') {
      ++hashes;
      ++p;
    }
    if (p >= text_.size() || text_[p] != '"') fail("bad raw string", start);
    const std::string delim = "\"" + std::string(hashes, '#');
    const std::size_t close = text_.find(delim, p + 1);
    if (close == std::string_view::npos) {
      fail("unterminated raw string", start);
    }
    pos_ = start;
    advance_to(close + delim.size());
    push(TokenKind::kString, start, pos_);
  }

  // Quoted literal whose opening quote is at `quote`; the token starts at
  // `start` (before any prefix).
  void lex_quoted(std::size_t start, std::size_t quote, bool raw = false) {
    if (start == quote) mark_start();
    const char q = text_[quote];
    bool triple = false;
    if ((lang_ == Language::kPython && (q == '"' || q == '\'')) ||
        (lang_ == Language::kJava && q == '"')) {
      triple = text_.compare(quote, 3, std::string(3, q)) == 0;
    }
    const bool multiline = triple || (lang_ == Language::kGo && q == '`') ||
                           (lang_ == Language::kRust && q == '"');
    const bool escapes = !(lang_ == Language::kGo && q == '`');
    std::size_t p = quote + (triple ? 3 : 1);
    std::size_t lines = 0;
    while (true) {
      if (p >= text_.size()) {
        fail(q == '\'' ? "unterminated character literal"
                       : "unterminated string literal",
             start);
      }
      const char c = text_[p];
      if (c == '\\' && escapes) {
        if (p + 1 < text_.size() && text_[p + 1] == '\n') ++lines;
        p += 2;
        continue;
      }
      (void)raw;
      if (c == '\n') {
        if (!multiline) {
          fail(q == '\'' ? "unterminated character literal"
                         : "unterminated string literal",
               start);
        }
        ++lines;
      }
      if (c == q) {
        if (!triple) {
          ++p;
          break;
        }
        if (text_.compare(p, 3, std::string(3, q)) == 0) {
          p += 3;
          break;
        }
      }
      ++p;
    }
    pos_ = p;
    push(q == '\'' && lang_ != Language::kPython ? TokenKind::kChar
                                                 : TokenKind::kString,
         start, p);
    line_ += static_cast<int>(lines);
  }

  void lex_rust_quote() {
    mark_start();
    const std::size_t start = pos_;
    const std::size_t p = pos_ + 1;
    if (p < text_.size() && ident_start(text_[p], lang_)) {
      std::size_t k = p;
      while (k < text_.size() && ident_char(text_[k], lang_)) ++k;
      const bool one_code_point =
          (k - p == 1) ||
          (static_cast<unsigned char>(text_[p]) >= 0x80 &&
           k - p <= 4 && [&] {
             // Every byte after the lead is a continuation byte.
             for (std::size_t i = p + 1; i < k; ++i) {
               if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) {
                 return false;
               }
             }
             return true;
           }());
      if (k < text_.size() && text_[k] == '\'' && one_code_point) {
        pos_ = k + 1;
        push(TokenKind::kChar, start, pos_);
        return;
      }
      pos_ = k;
      push(TokenKind::kLifetime, start, k);
      return;
    }
    lex_quoted(start, start);
  }

  void lex_number() {
    mark_start();
    const std::size_t start = pos_;
    std::size_t p = pos_;
    auto peek = [&](std::size_t i) -> char {
      return i < text_.size() ? text_[i] : '\0';
    };
    bool hex = false;
    if (peek(p) == '0' && (peek(p + 1) == 'x' || peek(p + 1) == 'X')) {
      hex = true;
      p += 2;
    } else if (peek(p) == '0' &&
               (peek(p + 1) == 'b' || peek(p + 1) == 'B' ||
                peek(p + 1) == 'o' || peek(p + 1) == 'O')) {
      p += 2;
    }
    auto digit_like = [&](char c) {
      if (is_digit(c) || c == '_') return true;
      if (hex && std::isxdigit(static_cast<unsigned char>(c))) return true;
      return false;
    };
    auto sep = [&](std::size_t i) {
      return lang_ == Language::kCCpp && peek(i) == '\'' &&
             i > start && std::isxdigit(static_cast<unsigned char>(peek(i - 1))) &&
             std::isxdigit(static_cast<unsigned char>(peek(i + 1)));
    };
    while (digit_like(peek(p)) || sep(p)) ++p;
    if (peek(p) == '.' && peek(p + 1) != '.' &&
        !(lang_ == Language::kRust &&
          ident_start(static_cast<unsigned char>(peek(p + 1)), lang_)) &&
        !(lang_ != Language::kPython &&
          ident_start(static_cast<unsigned char>(peek(p + 1)), lang_) &&
          peek(p + 1) != 'e' && peek(p + 1) != 'E' && peek(p + 1) != 'f' &&
          peek(p + 1) != 'F')) {
      ++p;
      while (digit_like(peek(p)) || sep(p)) ++p;
    }
    const char e = peek(p);
    const bool exp = hex ? (e == 'p' || e == 'P') : (e == 'e' || e == 'E');
    if (exp && (is_digit(peek(p + 1)) ||
                ((peek(p + 1) == '+' || peek(p + 1) == '-') &&
                 is_digit(peek(p + 2))))) {
      p += 2;
      while (is_digit(peek(p)) || peek(p) == '_') ++p;
    }
    // Suffixes such as u32, ULL, f, j, i.
    while (ident_char(static_cast<unsigned char>(peek(p)), lang_)) ++p;
    pos_ = p;
    push(TokenKind::kNumber, start, p);
  }

  void lex_operator() {
    mark_start();
    for (std::string_view op : operators_for(lang_)) {
      if (text_.compare(pos_, op.size(), op) == 0) {
        const std::size_t start = pos_;
        pos_ += op.size();
        push(TokenKind::kOperator, start, pos_);
        return;
      }
    }
    fail(std::string("unexpected character '") + text_[pos_] + "'", pos_);
  }

  std::string_view text_;
  Language lang_;
  std::size_t pos_ = 0;
  int line_ = 0;
  int token_line_ = 0;
  bool pending_newline_ = true;
  bool at_line_start_ = true;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> lex(std::string_view text, Language language) {
  return Lexer(text, language).run();
}

bool is_keyword(std::string_view word, Language language) {
  return keywords_for(language).contains(word);
}

bool is_reserved_name(std::string_view word, Language language) {
  static const Set kPython = {
      "print", "len", "range", "int", "str", "list", "dict", "set", "tuple",
      "float", "bool", "input", "open", "sum", "min", "max", "abs", "sorted",
      "enumerate", "zip", "map", "filter", "iter", "next", "object", "type",
      "isinstance", "super", "self", "cls", "Exception", "ValueError",
      "TypeError", "KeyError", "IndexError", "StopIteration", "any", "all",
      "round", "pow", "divmod", "ord", "chr", "hash", "id", "repr", "format",
      "reversed", "slice", "getattr", "setattr", "hasattr", "vars", "locals",
      "globals", "eval", "exec", "compile", "bytes", "bytearray", "frozenset",
      "complex", "property", "staticmethod", "classmethod", "callable",
      "main", "sys", "os", "math", "re", "json", "match", "case", "_"};
  static const Set kGo = {
      "len", "cap", "make", "new", "append", "copy", "delete", "panic",
      "recover", "print", "println", "int", "int8", "int16", "int32", "int64",
      "uint", "uint8", "uint16", "uint32", "uint64", "uintptr", "float32",
      "float64", "complex64", "complex128", "string", "bool", "byte", "rune",
      "error", "nil", "true", "false", "iota", "any", "comparable", "complex",
      "real", "imag", "close", "min", "max", "clear", "main", "init", "fmt",
      "os", "strings", "strconv", "math", "sort", "bufio", "errors", "_"};
  static const Set kC = {
      "main", "printf", "scanf", "malloc", "calloc", "realloc", "free",
      "size_t", "NULL", "std", "puts", "putchar", "getchar", "strlen",
      "memcpy", "memset", "strcmp", "exit", "abs", "sqrt", "pow", "cout",
      "cin", "endl", "string", "vector", "map", "set", "min", "max", "swap",
      "sort", "assert", "errno", "stdin", "stdout", "stderr", "FILE", "EOF",
      "int8_t", "int16_t", "int32_t", "int64_t", "uint8_t", "uint16_t",
      "uint32_t", "uint64_t", "bool", "true", "false"};
  static const Set kJava = {
      "String", "System", "Math", "Integer", "Long", "Double", "Object",
      "main", "List", "Map", "Set", "ArrayList", "HashMap", "Arrays",
      "Scanner", "Exception", "args", "out", "println", "length"};
  static const Set kRust = {
      "Vec", "String", "Option", "Some", "None", "Ok", "Err", "Box",
      "Result", "println", "print", "format", "vec", "main", "std", "io",
      "i8", "i16", "i32", "i64", "i128", "isize", "u8", "u16", "u32", "u64",
      "u128", "usize", "f32", "f64", "bool", "char", "str", "_"};
  if (is_keyword(word, language)) return true;
  switch (language) {
    case Language::kPython: return kPython.contains(word);
    case Language::kGo: return kGo.contains(word);
    case Language::kCCpp: return kC.contains(word);
    case Language::kJava: return kJava.contains(word);
    case Language::kRust: return kRust.contains(word);
  }
  return false;
}

}  // namespace pk::source

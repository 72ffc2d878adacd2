#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "perturbkit/core/language.h"

namespace pk::source {

enum class TokenKind {
  kIdentifier,
  kKeyword,
  kNumber,
  kString,
  kChar,
  kOperator,
  kPreprocessor,  // whole C preprocessor line
  kLifetime,      // Rust 'a
};

struct Token {
  TokenKind kind = TokenKind::kOperator;
  std::string text;
  std::size_t begin = 0;  // byte offsets into the source
  std::size_t end = 0;
  int line = 0;  // 0-based line of `begin`
  // An unescaped line break separates this token from the previous one (or
  // it is the first token).
  bool line_start = false;

  bool is(std::string_view s) const {
    return text == s && kind != TokenKind::kString && kind != TokenKind::kChar;
  }
  bool is_word() const {
    return kind == TokenKind::kIdentifier || kind == TokenKind::kKeyword;
  }
};

// Lexes `text`. Whitespace and comments never become tokens. Throws
// Error(kLexError) with the byte offset of the offending character.
std::vector<Token> lex(std::string_view text, Language language);

bool is_keyword(std::string_view word, Language language);
// Predeclared names a fresh identifier must never take (builtins, common
// library names).
bool is_reserved_name(std::string_view word, Language language);

}  // namespace pk::source

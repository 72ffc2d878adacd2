#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "perturbkit/source/structure.h"

namespace pk::source {

enum class ExprKind {
  kAtom,     // name, literal, call, index, member chain
  kParen,    // ( inner )
  kUnary,    // prefix operator
  kBinary,
  kTernary,  // conditional expression
};

struct Expr {
  ExprKind kind = ExprKind::kAtom;
  std::size_t begin = 0;  // token range [begin, end)
  std::size_t end = 0;
  std::string op;  // binary/unary operator, normalized ("not in", "is not")
  std::size_t op_begin = 0;
  std::size_t op_end = 0;
  int prec = 0;  // binding strength; higher binds tighter, atoms are highest
  bool chained = false;   // Python comparison chain `a < b < c`
  bool has_call = false;  // a call appears somewhere in the subtree
  std::vector<Expr> kids;
};

// Parses tokens [begin, end) as one expression. Throws Error(kParseError)
// if the range is not a single expression the parser understands.
Expr parse_expr(const SourceModel& model, std::size_t begin, std::size_t end);

// Binding strength of a binary operator; 0 if `op` is not one.
int binary_prec(const std::string& op, Language language);

bool is_comparison(const std::string& op, Language language);
bool is_logical(const std::string& op);  // and, or, &&, ||

}  // namespace pk::source

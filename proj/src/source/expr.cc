#include "perturbkit/source/expr.h"

#include <map>
#include <set>

#include "perturbkit/core/error.h"

namespace pk::source {

namespace {

constexpr int kAtomPrec = 100;
constexpr int kTernaryPrec = -1;

using PrecTable = std::map<std::string, int, std::less<>>;

const PrecTable& binary_table(Language language) {
  static const PrecTable kPython = {
      {"or", 1}, {"and", 2}, {"<", 4},  {">", 4},  {"==", 4}, {">=", 4},
      {"<=", 4}, {"!=", 4},  {"in", 4}, {"not in", 4}, {"is", 4},
      {"is not", 4}, {"|", 5}, {"^", 6}, {"&", 7}, {"<<", 8}, {">>", 8},
      {"+", 9},  {"-", 9},   {"*", 10}, {"/", 10}, {"//", 10}, {"%", 10},
      {"@", 10}, {"**", 12}};
  static const PrecTable kC = {
      {"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},  {"==", 6},
      {"!=", 6}, {"<", 7},  {">", 7},  {"<=", 7}, {">=", 7}, {"<=>", 7},
      {"<<", 8}, {">>", 8}, {"+", 9},  {"-", 9},  {"*", 10}, {"/", 10},
      {"%", 10}};
  static const PrecTable kJava = {
      {"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},   {"==", 6},
      {"!=", 6}, {"<", 7},  {">", 7},  {"<=", 7}, {">=", 7},  {"<<", 8},
      {">>", 8}, {">>>", 8}, {"+", 9}, {"-", 9},  {"*", 10},  {"/", 10},
      {"%", 10}};
  static const PrecTable kGo = {
      {"||", 1}, {"&&", 2}, {"==", 3}, {"!=", 3}, {"<", 3},  {"<=", 3},
      {">", 3},  {">=", 3}, {"+", 4},  {"-", 4},  {"|", 4},  {"^", 4},
      {"*", 5},  {"/", 5},  {"%", 5},  {"<<", 5}, {">>", 5}, {"&", 5},
      {"&^", 5}};
  static const PrecTable kRust = {
      {"||", 1}, {"&&", 2}, {"==", 3}, {"!=", 3}, {"<", 3},  {"<=", 3},
      {">", 3},  {">=", 3}, {"|", 4},  {"^", 5},  {"&", 6},  {"<<", 7},
      {">>", 7}, {"+", 8},  {"-", 8},  {"*", 9},  {"/", 9},  {"%", 9},
      {"as", 10}};
  switch (language) {
    case Language::kPython: return kPython;
    case Language::kCCpp: return kC;
    case Language::kJava: return kJava;
    case Language::kGo: return kGo;
    case Language::kRust: return kRust;
  }
  return kC;
}

int unary_prec(Language language) {
  switch (language) {
    case Language::kPython: return 11;
    case Language::kCCpp: return 12;
    case Language::kJava: return 12;
    case Language::kGo: return 6;
    case Language::kRust: return 11;
  }
  return 12;
}

class Parser {
 public:
  Parser(const SourceModel& m, std::size_t begin, std::size_t end)
      : m_(m), lang_(m.language()), pos_(begin), end_(end) {}

  Expr top() {
    Expr e = parse_top();
    if (pos_ != end_) fail("unexpected token in expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    const std::size_t at = pos_ < m_.size() ? m_.tok(pos_).begin
                                            : m_.text().size();
    throw Error(ErrorCode::kParseError, what, at);
  }

  bool at(std::string_view s, std::size_t off = 0) const {
    return pos_ + off < end_ && m_.tok(pos_ + off).is(s);
  }
  bool at_kind(TokenKind k, std::size_t off = 0) const {
    return pos_ + off < end_ && m_.tok(pos_ + off).kind == k;
  }

  Expr parse_top() {
    if (at("lambda") || at("yield")) {
      fail("unsupported expression");
    }
    if (lang_ == Language::kRust && (at("|") || at("||") || at("move"))) {
      fail("closure");
    }
    Expr lhs = parse_binary(1);
    if (lang_ == Language::kPython && at("if")) {
      const std::size_t if_tok = pos_;
      ++pos_;
      Expr cond = parse_binary(1);
      if (!at("else")) fail("expected 'else'");
      ++pos_;
      Expr other = parse_top();
      return ternary(std::move(lhs), if_tok, std::move(cond), std::move(other));
    }
    if ((lang_ == Language::kCCpp || lang_ == Language::kJava) && at("?")) {
      const std::size_t q = pos_;
      ++pos_;
      Expr mid = parse_top();
      if (!at(":")) fail("expected ':'");
      ++pos_;
      Expr other = parse_top();
      return ternary(std::move(lhs), q, std::move(mid), std::move(other));
    }
    if (lang_ == Language::kRust && (at("..") || at("..="))) {
      Expr e;
      e.kind = ExprKind::kBinary;
      e.begin = lhs.begin;
      e.op = m_.tok(pos_).text;
      e.op_begin = pos_;
      e.op_end = pos_ + 1;
      e.prec = 0;
      ++pos_;
      e.has_call = lhs.has_call;
      e.kids.push_back(std::move(lhs));
      if (pos_ < end_) {
        Expr rhs = parse_binary(1);
        e.has_call |= rhs.has_call;
        e.kids.push_back(std::move(rhs));
      }
      e.end = pos_;
      return e;
    }
    return lhs;
  }

  Expr ternary(Expr a, std::size_t op, Expr b, Expr c) {
    Expr e;
    e.kind = ExprKind::kTernary;
    e.begin = a.begin;
    e.end = c.end;
    e.op = m_.tok(op).text;
    e.op_begin = op;
    e.op_end = op + 1;
    e.prec = kTernaryPrec;
    e.has_call = a.has_call || b.has_call || c.has_call;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    e.kids.push_back(std::move(c));
    return e;
  }

  // Returns the operator at pos_ and its token length, or prec 0.
  int peek_binary(std::string& op, std::size_t& len) const {
    if (pos_ >= end_) return 0;
    const Token& t = m_.tok(pos_);
    if (t.kind == TokenKind::kString || t.kind == TokenKind::kChar) return 0;
    len = 1;
    op = t.text;
    if (lang_ == Language::kPython) {
      if (t.is("not") && at("in", 1)) {
        op = "not in";
        len = 2;
      } else if (t.is("is") && at("not", 1)) {
        op = "is not";
        len = 2;
      }
    }
    if (t.kind != TokenKind::kOperator && t.kind != TokenKind::kKeyword) {
      return 0;
    }
    const auto& table = binary_table(lang_);
    const auto it = table.find(op);
    return it == table.end() ? 0 : it->second;
  }

  Expr parse_binary(int min_prec) {
    Expr lhs = parse_unary();
    while (true) {
      std::string op;
      std::size_t len = 0;
      const int prec = peek_binary(op, len);
      if (prec == 0 || prec < min_prec) break;
      const std::size_t op_begin = pos_;
      pos_ += len;
      Expr rhs;
      if (op == "as") {
        rhs = parse_type();
      } else {
        const bool right = lang_ == Language::kPython && op == "**";
        rhs = parse_binary(right ? prec : prec + 1);
      }
      Expr e;
      e.kind = ExprKind::kBinary;
      e.begin = lhs.begin;
      e.end = rhs.end;
      e.op = op;
      e.op_begin = op_begin;
      e.op_end = op_begin + len;
      e.prec = prec;
      e.has_call = lhs.has_call || rhs.has_call;
      if (is_comparison(op, lang_) && lhs.kind == ExprKind::kBinary &&
          is_comparison(lhs.op, lang_) && lhs.prec == prec) {
        if (lang_ == Language::kPython) {
          e.chained = true;
        } else if (lang_ == Language::kRust) {
          fail("chained comparison");
        }
      }
      e.kids.push_back(std::move(lhs));
      e.kids.push_back(std::move(rhs));
      lhs = std::move(e);
    }
    return lhs;
  }

  // Rust cast target: path with optional generic arguments.
  Expr parse_type() {
    Expr e;
    e.begin = pos_;
    if (!at_kind(TokenKind::kIdentifier) && !at_kind(TokenKind::kKeyword)) {
      fail("expected a type");
    }
    ++pos_;
    while (at("::") && pos_ + 1 < end_) pos_ += 2;
    e.end = pos_;
    e.prec = kAtomPrec;
    return e;
  }

  bool unary_here(std::string& op) const {
    if (pos_ >= end_) return false;
    const Token& t = m_.tok(pos_);
    if (t.kind != TokenKind::kOperator && t.kind != TokenKind::kKeyword) {
      return false;
    }
    op = t.text;
    switch (lang_) {
      case Language::kPython:
        return op == "not" || op == "-" || op == "+" || op == "~" ||
               op == "await";
      case Language::kCCpp:
        return op == "!" || op == "~" || op == "-" || op == "+" ||
               op == "*" || op == "&" || op == "++" || op == "--" ||
               op == "sizeof";
      case Language::kJava:
        return op == "!" || op == "~" || op == "-" || op == "+" ||
               op == "++" || op == "--";
      case Language::kGo:
        return op == "!" || op == "-" || op == "+" || op == "^" ||
               op == "*" || op == "&" || op == "<-";
      case Language::kRust:
        return op == "!" || op == "-" || op == "*" || op == "&" ||
               op == "&&";
    }
    return false;
  }

  Expr parse_unary() {
    std::string op;
    if (unary_here(op)) {
      const std::size_t op_tok = pos_;
      ++pos_;
      if (lang_ == Language::kRust && (op == "&" || op == "&&") && at("mut")) {
        ++pos_;
      }
      const int prec = op == "not" ? 3 : unary_prec(lang_);
      Expr operand = op == "not" ? parse_binary(4)
                     : lang_ == Language::kPython ? parse_binary(12)
                                                  : parse_unary_operand();
      Expr e;
      e.kind = ExprKind::kUnary;
      e.begin = op_tok;
      e.end = operand.end;
      e.op = op;
      e.op_begin = op_tok;
      e.op_end = op_tok + 1;
      e.prec = prec;
      e.has_call = operand.has_call;
      e.kids.push_back(std::move(operand));
      return e;
    }
    return parse_postfix(parse_primary());
  }

  Expr parse_unary_operand() {
    std::string op;
    if (unary_here(op)) return parse_unary();
    return parse_postfix(parse_primary());
  }

  Expr parse_primary() {
    if (pos_ >= end_) fail("expected an expression");
    const Token& t = m_.tok(pos_);
    Expr e;
    e.begin = pos_;
    e.prec = kAtomPrec;
    if (t.is("(")) {
      const std::size_t close = m_.match(pos_);
      if (close >= end_) fail("unbalanced parenthesis");
      e.kind = ExprKind::kParen;
      try {
        Parser inner(m_, pos_ + 1, close);
        Expr in = inner.top();
        e.has_call = in.has_call;
        e.kids.push_back(std::move(in));
      } catch (const Error&) {
        e.has_call = true;  // unknown content: assume the worst
      }
      pos_ = close + 1;
      e.end = pos_;
      return e;
    }
    if (t.is("[") || t.is("{")) {
      const std::size_t close = m_.match(pos_);
      if (close >= end_) fail("unbalanced bracket");
      e.has_call = contains_call(pos_ + 1, close);
      pos_ = close + 1;
      e.end = pos_;
      return e;
    }
    if (lang_ == Language::kJava && t.is("new")) {
      ++pos_;
      while (pos_ < end_ && !at("(") && !at("[")) ++pos_;
      if (pos_ >= end_) fail("bad 'new'");
      pos_ = m_.match(pos_) + 1;
      while (at("[")) pos_ = m_.match(pos_) + 1;
      if (at("{")) pos_ = m_.match(pos_) + 1;
      e.has_call = true;
      e.end = pos_;
      return e;
    }
    if (lang_ == Language::kCCpp && t.kind == TokenKind::kKeyword &&
        (t.text == "static_cast" || t.text == "reinterpret_cast" ||
         t.text == "const_cast" || t.text == "dynamic_cast") &&
        at("<", 1)) {
      pos_ += 2;
      int depth = 1;
      while (pos_ < end_ && depth > 0) {
        if (at("<")) ++depth;
        if (at(">")) --depth;
        if (at(">>")) depth -= 2;
        ++pos_;
      }
      if (!at("(")) fail("bad cast");
      pos_ = m_.match(pos_) + 1;
      e.end = pos_;
      return e;
    }
    switch (t.kind) {
      case TokenKind::kIdentifier:
      case TokenKind::kNumber:
      case TokenKind::kChar:
      case TokenKind::kLifetime:
        ++pos_;
        break;
      case TokenKind::kString:
        ++pos_;
        while (at_kind(TokenKind::kString)) ++pos_;
        break;
      case TokenKind::kKeyword: {
        static const std::set<std::string, std::less<>> kValues = {
            "True", "False", "None",  "true", "false", "nil",
            "null", "this",  "self",  "Self", "super", "nullptr",
            "iota", "crate"};
        if (!kValues.contains(t.text)) fail("unexpected keyword");
        ++pos_;
        break;
      }
      default:
        fail("expected an expression");
    }
    e.end = pos_;
    return e;
  }

  bool contains_call(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i + 1 < e; ++i) {
      const Token& t = m_.tok(i);
      if ((t.kind == TokenKind::kIdentifier || t.is(")") || t.is("]") ||
           t.is(">")) &&
          m_.tok(i + 1).is("(")) {
        return true;
      }
      if (t.is("!") && m_.tok(i + 1).is("(")) return true;
    }
    return false;
  }

  Expr parse_postfix(Expr base) {
    while (pos_ < end_) {
      const Token& t = m_.tok(pos_);
      if (t.is("(")) {
        pos_ = m_.match(pos_) + 1;
        base.has_call = true;
      } else if (t.is("[")) {
        const std::size_t close = m_.match(pos_);
        base.has_call |= contains_call(pos_ + 1, close);
        pos_ = close + 1;
      } else if (t.is("{") && (lang_ == Language::kGo ||
                               lang_ == Language::kRust ||
                               lang_ == Language::kCCpp) &&
                 base.kind == ExprKind::kAtom &&
                 m_.tok(pos_ - 1).kind == TokenKind::kIdentifier) {
        const std::size_t close = m_.match(pos_);
        base.has_call |= contains_call(pos_ + 1, close);
        pos_ = close + 1;
      } else if ((t.is(".") || t.is("->")) && pos_ + 1 < end_) {
        const Token& n = m_.tok(pos_ + 1);
        if (n.is("(") && lang_ == Language::kGo) {  // type assertion
          pos_ = m_.match(pos_ + 1) + 1;
        } else if (n.kind == TokenKind::kIdentifier ||
                   n.kind == TokenKind::kNumber ||
                   n.kind == TokenKind::kKeyword) {
          pos_ += 2;
          if (lang_ == Language::kRust && n.is("await")) base.has_call = true;
        } else {
          break;
        }
      } else if (t.is("::") && pos_ + 1 < end_) {
        if (m_.tok(pos_ + 1).is("<")) {
          pos_ += 2;
          int depth = 1;
          while (pos_ < end_ && depth > 0) {
            if (at("<")) ++depth;
            if (at(">")) --depth;
            if (at(">>")) depth -= 2;
            ++pos_;
          }
        } else {
          pos_ += 2;
        }
      } else if (t.is("?") && lang_ == Language::kRust) {
        ++pos_;
        base.has_call = true;
      } else if (t.is("!") && lang_ == Language::kRust && pos_ + 1 < end_ &&
                 (m_.tok(pos_ + 1).is("(") || m_.tok(pos_ + 1).is("[") ||
                  m_.tok(pos_ + 1).is("{"))) {
        pos_ = m_.match(pos_ + 1) + 1;
        base.has_call = true;
      } else if ((t.is("++") || t.is("--")) &&
                 (lang_ == Language::kCCpp || lang_ == Language::kJava)) {
        ++pos_;
        base.has_call = true;  // side effect
      } else {
        break;
      }
      if (base.kind != ExprKind::kAtom) {
        // Postfix on a parenthesized expression: the group is now opaque.
        base.kind = ExprKind::kAtom;
        base.kids.clear();
      }
    }
    base.end = pos_;
    return base;
  }

  const SourceModel& m_;
  Language lang_;
  std::size_t pos_;
  std::size_t end_;
};

}  // namespace

Expr parse_expr(const SourceModel& model, std::size_t begin,
                std::size_t end) {
  if (begin >= end) {
    throw Error(ErrorCode::kParseError, "empty expression",
                model.byte_begin(begin));
  }
  return Parser(model, begin, end).top();
}

int binary_prec(const std::string& op, Language language) {
  const auto& table = binary_table(language);
  const auto it = table.find(op);
  return it == table.end() ? 0 : it->second;
}

bool is_comparison(const std::string& op, Language language) {
  if (language == Language::kPython) {
    return op == "<" || op == ">" || op == "<=" || op == ">=" || op == "==" ||
           op == "!=" || op == "in" || op == "not in" || op == "is" ||
           op == "is not";
  }
  return op == "<" || op == ">" || op == "<=" || op == ">=" || op == "==" ||
         op == "!=";
}

bool is_logical(const std::string& op) {
  return op == "and" || op == "or" || op == "&&" || op == "||";
}

}  // namespace pk::source

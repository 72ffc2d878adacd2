#include "perturbkit/source/structure.h"

#include <algorithm>
#include <functional>
#include <set>

#include "perturbkit/core/error.h"

namespace pk::source {

namespace {

bool is_open(const Token& t) {
  return t.kind == TokenKind::kOperator &&
         (t.text == "(" || t.text == "[" || t.text == "{");
}

bool is_close(const Token& t) {
  return t.kind == TokenKind::kOperator &&
         (t.text == ")" || t.text == "]" || t.text == "}");
}

char closer_for(const std::string& open) {
  return open == "(" ? ')' : open == "[" ? ']' : '}';
}

[[noreturn]] void parse_fail(const std::string& what, const Token& at) {
  throw Error(ErrorCode::kParseError, what, at.begin);
}

// ---------------------------------------------------------------- Python

struct PyLine {
  std::size_t first = 0;  // tokens [first, last)
  std::size_t last = 0;
  int indent = 0;
};

int column_of(const std::string& text, std::size_t pos) {
  std::size_t start = pos;
  while (start > 0 && text[start - 1] != '\n') --start;
  int col = 0;
  for (std::size_t i = start; i < pos; ++i) {
    col = text[i] == '\t' ? (col / 8 + 1) * 8 : col + 1;
  }
  return col;
}

const std::set<std::string, std::less<>>& python_clause_words() {
  static const std::set<std::string, std::less<>> kWords = {
      "elif", "else", "except", "finally"};
  return kWords;
}

class PythonBuilder {
 public:
  PythonBuilder(const std::string& text, const std::vector<Token>& tokens,
                const std::vector<std::size_t>& match)
      : text_(text), tokens_(tokens), match_(match) {}

  std::vector<Stmt> build() {
    split_lines();
    std::size_t pos = 0;
    auto out = suite(pos, lines_.empty() ? 0 : lines_[0].indent);
    if (pos != lines_.size()) {
      parse_fail("unexpected indentation", tokens_[lines_[pos].first]);
    }
    return out;
  }

  int unit() const { return unit_; }

 private:
  void split_lines() {
    std::size_t i = 0;
    while (i < tokens_.size()) {
      PyLine line;
      line.first = i;
      line.indent = column_of(text_, tokens_[i].begin);
      std::size_t j = i;
      while (j < tokens_.size()) {
        j = is_open(tokens_[j]) ? match_[j] + 1 : j + 1;
        if (j < tokens_.size() && tokens_[j].line_start) break;
      }
      line.last = j;
      lines_.push_back(line);
      i = j;
    }
  }

  // Depth-0 colon ending a compound header, skipping lambda colons.
  std::size_t header_colon(const PyLine& line) const {
    int lambdas = 0;
    for (std::size_t j = line.first; j < line.last; ++j) {
      const Token& t = tokens_[j];
      if (is_open(t)) {
        j = match_[j];
        continue;
      }
      if (t.kind == TokenKind::kKeyword && t.text == "lambda") ++lambdas;
      if (t.is(":")) {
        if (lambdas == 0) return j;
        --lambdas;
      }
    }
    return kNone;
  }

  bool is_compound_start(const PyLine& line) const {
    const Token& t = tokens_[line.first];
    static const std::set<std::string, std::less<>> kWords = {
        "if",   "elif",  "else", "for",   "while", "try",
        "except", "finally", "with", "def", "class", "async"};
    if (t.kind == TokenKind::kKeyword && kWords.contains(t.text)) return true;
    // Soft keywords: `match x:` / `case p:` with something after the word.
    if (t.kind == TokenKind::kIdentifier &&
        (t.text == "match" || t.text == "case") &&
        line.last - line.first >= 3 && tokens_[line.last - 1].is(":")) {
      const Token& n = tokens_[line.first + 1];
      return !(n.is("=") || n.is(".") || n.is(",") || n.is(")") ||
               n.is(":") ||
               (n.kind == TokenKind::kOperator && n.text.back() == '=' &&
                n.text != "=="));
    }
    return false;
  }

  Clause make_clause(const PyLine& line, std::size_t& pos, int indent) {
    Clause c;
    const Token& first = tokens_[line.first];
    c.keyword = line.first;
    std::size_t kw = line.first;
    if (first.is("async")) kw = line.first + 1;
    const std::string& word = tokens_[kw].text;
    c.kind = word == "if"       ? ClauseKind::kIf
             : word == "elif"   ? ClauseKind::kElif
             : word == "else"   ? ClauseKind::kElse
             : word == "except" ? ClauseKind::kExcept
             : word == "finally" ? ClauseKind::kFinally
                                 : ClauseKind::kBody;
    const std::size_t colon = header_colon(line);
    if (colon == kNone) parse_fail("expected ':'", tokens_[line.last - 1]);
    c.head_begin = kw + 1;
    c.head_end = colon;
    c.open = colon;
    ++pos;
    if (colon + 1 < line.last) {
      c.inline_body = true;
      Stmt s;
      s.begin = colon + 1;
      s.end = line.last;
      s.indent = indent;
      c.body.push_back(std::move(s));
      return c;
    }
    if (pos >= lines_.size() || lines_[pos].indent <= indent) {
      parse_fail("expected an indented block", tokens_[colon]);
    }
    const int child = lines_[pos].indent;
    if (unit_ == 0 || child - indent < unit_) unit_ = child - indent;
    c.body = suite(pos, child);
    return c;
  }

  std::vector<Stmt> suite(std::size_t& pos, int indent) {
    std::vector<Stmt> out;
    while (pos < lines_.size()) {
      const PyLine& line = lines_[pos];
      if (line.indent < indent) break;
      if (line.indent > indent) {
        parse_fail("unexpected indentation", tokens_[line.first]);
      }
      const Token& first = tokens_[line.first];
      if (first.kind == TokenKind::kKeyword &&
          python_clause_words().contains(first.text) &&
          header_colon(line) != kNone) {
        parse_fail("'" + first.text + "' without a matching statement",
                   first);
      }
      Stmt s;
      s.begin = line.first;
      s.indent = indent;
      if (!is_compound_start(line)) {
        s.kind = StmtKind::kSimple;
        s.end = line.last;
        ++pos;
        out.push_back(std::move(s));
        continue;
      }
      std::size_t kw = line.first;
      if (first.is("async")) kw = line.first + 1;
      const std::string word = tokens_[kw].text;
      s.kind = word == "if"      ? StmtKind::kIf
               : word == "for"   ? StmtKind::kFor
               : word == "while" ? StmtKind::kWhile
               : word == "try"   ? StmtKind::kTry
               : word == "match" ? StmtKind::kSwitch
                                 : StmtKind::kCompound;
      s.clauses.push_back(make_clause(line, pos, indent));
      if (s.kind == StmtKind::kSwitch) s.clauses.back().opaque = true;
      // Attach continuation clauses.
      while (pos < lines_.size() && lines_[pos].indent == indent) {
        const Token& t = tokens_[lines_[pos].first];
        bool attach = false;
        if (t.kind == TokenKind::kKeyword) {
          if (s.kind == StmtKind::kIf) attach = t.text == "elif" || t.text == "else";
          if (s.kind == StmtKind::kFor || s.kind == StmtKind::kWhile) {
            attach = t.text == "else";
          }
          if (s.kind == StmtKind::kTry) {
            attach = t.text == "except" || t.text == "else" ||
                     t.text == "finally";
          }
        }
        if (!attach) break;
        s.clauses.push_back(make_clause(lines_[pos], pos, indent));
      }
      s.end = lines_[pos - 1].last;
      out.push_back(std::move(s));
    }
    return out;
  }

  const std::string& text_;
  const std::vector<Token>& tokens_;
  const std::vector<std::size_t>& match_;
  std::vector<PyLine> lines_;
  int unit_ = 0;
};

void collect_python_functions(const std::vector<Token>& tokens,
                              const std::vector<Stmt>& stmts, bool in_class,
                              std::vector<Function>& out) {
  for (const Stmt& s : stmts) {
    if (s.kind == StmtKind::kCompound && !s.clauses.empty()) {
      std::size_t kw = s.begin;
      if (tokens[kw].is("async")) ++kw;
      if (tokens[kw].is("def") && kw + 2 < tokens.size() &&
          tokens[kw + 1].kind == TokenKind::kIdentifier &&
          !s.clauses[0].inline_body) {
        Function f;
        f.name = tokens[kw + 1].text;
        f.name_tok = kw + 1;
        f.decl_begin = s.begin;
        // Type parameter lists `def f[T](...)`.
        std::size_t p = kw + 2;
        while (p < s.clauses[0].open && !tokens[p].is("(")) ++p;
        f.params_open = p;
        f.body_open = s.clauses[0].open;
        f.end = s.end;
        f.body = s.clauses[0].body;
        f.is_method = in_class;
        f.indent = s.indent;
        // params_close is fixed up by the caller, which owns the matches.
        out.push_back(std::move(f));
        collect_python_functions(tokens, s.clauses[0].body, false, out);
        continue;
      }
      const bool is_class = tokens[kw].is("class");
      for (const Clause& c : s.clauses) {
        collect_python_functions(tokens, c.body, is_class, out);
      }
      continue;
    }
    for (const Clause& c : s.clauses) {
      collect_python_functions(tokens, c.body, false, out);
    }
  }
}

// ---------------------------------------------------------- brace languages

class BraceParser {
 public:
  BraceParser(const std::vector<Token>& tokens,
              const std::vector<std::size_t>& match, Language language)
      : t_(tokens), match_(match), lang_(language) {}

  std::vector<Stmt> parse_block(std::size_t begin, std::size_t end) {
    std::vector<Stmt> out;
    std::size_t i = begin;
    while (i < end) {
      Stmt s = parse_stmt(i, end);
      i = s.end;
      out.push_back(std::move(s));
    }
    return out;
  }

 private:
  bool is(std::size_t i, std::string_view s) const {
    return i < t_.size() && t_[i].is(s);
  }

  bool is_kw(std::size_t i, std::string_view s) const {
    return i < t_.size() && t_[i].kind == TokenKind::kKeyword &&
           t_[i].text == s;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t i) const {
    parse_fail(what, t_[std::min(i, t_.size() - 1)]);
  }

  // Skips to just past the bracket group at i.
  std::size_t skip_group(std::size_t i) const { return match_[i] + 1; }

  // Scans header tokens until the `{` at depth 0 that opens the body.
  std::size_t find_body_brace(std::size_t i, std::size_t end) const {
    while (i < end) {
      if (is(i, "{")) return i;
      if (is_open(t_[i])) {
        i = skip_group(i);
        continue;
      }
      if (is(i, ";") && lang_ != Language::kGo) break;
      ++i;
    }
    fail("expected '{'", i);
  }

  // Body of a control statement: braced block or a single statement.
  Clause body_clause(ClauseKind kind, std::size_t at, std::size_t end) {
    Clause c;
    c.kind = kind;
    if (is(at, "{")) {
      c.open = at;
      c.close = match_[at];
      c.body = parse_block(at + 1, c.close);
      return c;
    }
    if (lang_ == Language::kGo || lang_ == Language::kRust) {
      fail("expected '{'", at);
    }
    if (at >= end) fail("expected a statement", at);
    c.body.push_back(parse_stmt(at, end));
    return c;
  }

  std::size_t clause_end(const Clause& c) const {
    if (c.close != kNone) return c.close + 1;
    return c.body.back().end;
  }

  // Parenthesized header `( ... )` for C-family and Java.
  std::size_t paren_header(Clause& c, std::size_t open) const {
    if (!is(open, "(")) fail("expected '('", open);
    c.head_begin = open + 1;
    c.head_end = match_[open];
    return match_[open] + 1;
  }

  Stmt parse_if(std::size_t i, std::size_t end) {
    Stmt s;
    s.kind = StmtKind::kIf;
    s.begin = i;
    Clause c;
    std::size_t after;
    if (lang_ == Language::kGo || lang_ == Language::kRust) {
      const std::size_t brace = find_body_brace(i + 1, end);
      c.head_begin = i + 1;
      c.head_end = brace;
      after = brace;
    } else {
      std::size_t open = i + 1;
      if (is_kw(open, "constexpr")) ++open;
      after = paren_header(c, open);
    }
    Clause body = body_clause(ClauseKind::kIf, after, end);
    body.keyword = i;
    body.head_begin = c.head_begin;
    body.head_end = c.head_end;
    std::size_t k = clause_end(body);
    s.clauses.push_back(std::move(body));
    if (k < end && is_kw(k, "else")) {
      if (is_kw(k + 1, "if")) {
        Stmt nested = parse_if(k + 1, end);
        nested.clauses.front().kind = ClauseKind::kElif;
        nested.clauses.front().keyword = k;
        for (Clause& n : nested.clauses) s.clauses.push_back(std::move(n));
        k = nested.end;
      } else {
        Clause e = body_clause(ClauseKind::kElse, k + 1, end);
        e.keyword = k;
        k = clause_end(e);
        s.clauses.push_back(std::move(e));
      }
    }
    s.end = k;
    return s;
  }

  Stmt parse_loop(std::size_t i, std::size_t end, StmtKind kind) {
    Stmt s;
    s.kind = kind;
    s.begin = i;
    Clause c;
    std::size_t after;
    if (lang_ == Language::kGo || lang_ == Language::kRust) {
      const std::size_t brace = find_body_brace(i + 1, end);
      c.head_begin = i + 1;
      c.head_end = brace;
      after = brace;
    } else {
      after = paren_header(c, i + 1);
    }
    Clause body = body_clause(ClauseKind::kBody, after, end);
    body.keyword = i;
    body.head_begin = c.head_begin;
    body.head_end = c.head_end;
    s.end = clause_end(body);
    s.clauses.push_back(std::move(body));
    return s;
  }

  Stmt parse_do(std::size_t i, std::size_t end) {
    Stmt s;
    s.kind = StmtKind::kDoWhile;
    s.begin = i;
    Clause body = body_clause(ClauseKind::kBody, i + 1, end);
    body.keyword = i;
    std::size_t k = clause_end(body);
    if (!is_kw(k, "while")) fail("expected 'while'", k);
    k = paren_header(body, k + 1);
    if (!is(k, ";")) fail("expected ';'", k);
    s.end = k + 1;
    s.clauses.push_back(std::move(body));
    return s;
  }

  // Statement whose body we keep opaque: switch, select, match.
  Stmt parse_opaque(std::size_t i, std::size_t end, StmtKind kind) {
    Stmt s;
    s.kind = kind;
    s.begin = i;
    Clause c;
    c.keyword = i;
    c.head_begin = i + 1;
    const std::size_t brace = find_body_brace(i + 1, end);
    c.head_end = brace;
    if (lang_ == Language::kCCpp || lang_ == Language::kJava) {
      if (is(i + 1, "(")) {
        c.head_begin = i + 2;
        c.head_end = match_[i + 1];
      }
    }
    c.open = brace;
    c.close = match_[brace];
    c.opaque = true;
    s.end = c.close + 1;
    if (lang_ == Language::kRust || lang_ == Language::kJava) {
      if (is(s.end, ";")) ++s.end;
    }
    s.clauses.push_back(std::move(c));
    return s;
  }

  Stmt parse_try(std::size_t i, std::size_t end) {
    Stmt s;
    s.kind = StmtKind::kTry;
    s.begin = i;
    std::size_t k = i + 1;
    Clause head;
    head.kind = ClauseKind::kBody;
    head.keyword = i;
    if (is(k, "(")) {  // try-with-resources
      head.head_begin = k + 1;
      head.head_end = match_[k];
      k = match_[k] + 1;
    }
    if (!is(k, "{")) fail("expected '{'", k);
    head.open = k;
    head.close = match_[k];
    head.body = parse_block(k + 1, head.close);
    k = head.close + 1;
    s.clauses.push_back(std::move(head));
    while (k < end && (is_kw(k, "catch") || is_kw(k, "finally"))) {
      Clause c;
      c.keyword = k;
      c.kind = is_kw(k, "catch") ? ClauseKind::kExcept : ClauseKind::kFinally;
      std::size_t b = k + 1;
      if (c.kind == ClauseKind::kExcept) b = paren_header(c, b);
      if (!is(b, "{")) fail("expected '{'", b);
      c.open = b;
      c.close = match_[b];
      c.body = parse_block(b + 1, c.close);
      k = c.close + 1;
      s.clauses.push_back(std::move(c));
    }
    s.end = k;
    return s;
  }

  // Item with a braced body parsed as an opaque compound (local classes,
  // nested Rust items).
  Stmt parse_item(std::size_t i, std::size_t end) {
    Stmt s;
    s.kind = StmtKind::kCompound;
    s.begin = i;
    std::size_t k = i;
    while (k < end && !is(k, "{") && !is(k, ";")) {
      if (is_open(t_[k])) {
        k = skip_group(k);
        continue;
      }
      ++k;
    }
    if (k >= end) fail("unterminated declaration", i);
    if (is(k, ";")) {
      s.end = k + 1;
      return s;
    }
    Clause c;
    c.keyword = i;
    c.open = k;
    c.close = match_[k];
    c.opaque = true;
    s.end = c.close + 1;
    if (is(s.end, ";")) ++s.end;
    s.clauses.push_back(std::move(c));
    return s;
  }

  bool go_ends_line(const Token& t) const {
    switch (t.kind) {
      case TokenKind::kIdentifier:
      case TokenKind::kNumber:
      case TokenKind::kString:
      case TokenKind::kChar:
        return true;
      case TokenKind::kKeyword:
        return t.text == "break" || t.text == "continue" ||
               t.text == "fallthrough" || t.text == "return";
      case TokenKind::kOperator:
        return t.text == "++" || t.text == "--" || t.text == ")" ||
               t.text == "]" || t.text == "}";
      default:
        return false;
    }
  }

  Stmt parse_simple(std::size_t i, std::size_t end) {
    Stmt s;
    s.kind = StmtKind::kSimple;
    s.begin = i;
    std::size_t j = i;
    while (j < end) {
      if (is(j, ";")) {
        s.end = j + 1;
        return s;
      }
      std::size_t next = is_open(t_[j]) ? skip_group(j) : j + 1;
      if (lang_ == Language::kGo) {
        const std::size_t last = next - 1;
        if (next >= end ||
            (t_[next].line_start && go_ends_line(t_[last]))) {
          s.end = next;
          return s;
        }
      }
      j = next;
    }
    if (lang_ == Language::kRust) {
      s.end = end;
      s.tail = true;
      return s;
    }
    if (lang_ == Language::kGo) {
      s.end = end;
      return s;
    }
    fail("expected ';'", end - 1 < t_.size() ? end - 1 : t_.size() - 1);
  }

  // Rust statements that start with a block-like expression end at its
  // closing brace unless the value is used further.
  Stmt rust_block_like(Stmt s, std::size_t end) {
    if (s.end < end && (is(s.end, ".") || is(s.end, "?"))) {
      Stmt simple = parse_simple(s.end, end);
      s.kind = StmtKind::kSimple;
      s.clauses.clear();
      s.end = simple.end;
      s.tail = simple.tail;
      return s;
    }
    if (s.end < end && is(s.end, ";")) {
      ++s.end;
    } else if (s.end == end) {
      s.tail = true;
    }
    return s;
  }

  Stmt parse_stmt(std::size_t i, std::size_t end) {
    const Token& t = t_[i];
    if (t.is("{")) {
      Stmt s;
      s.kind = StmtKind::kBlock;
      s.begin = i;
      Clause c;
      c.open = i;
      c.close = match_[i];
      c.body = parse_block(i + 1, c.close);
      s.end = c.close + 1;
      s.clauses.push_back(std::move(c));
      return lang_ == Language::kRust ? rust_block_like(std::move(s), end) : s;
    }
    if (t.is(";")) {
      Stmt s;
      s.begin = i;
      s.end = i + 1;
      return s;
    }
    if (t.kind == TokenKind::kPreprocessor) {
      Stmt s;
      s.begin = i;
      s.end = i + 1;
      return s;
    }
    // Labels.
    if (i + 1 < end && is(i + 1, ":") &&
        ((t.kind == TokenKind::kIdentifier && lang_ != Language::kRust) ||
         (t.kind == TokenKind::kLifetime && lang_ == Language::kRust))) {
      Stmt s;
      s.kind = StmtKind::kLabel;
      s.begin = i;
      s.end = i + 2;
      return s;
    }
    if (t.kind == TokenKind::kKeyword) {
      const std::string& w = t.text;
      if (w == "case" || w == "default") {
        if (lang_ != Language::kRust && !(lang_ == Language::kJava &&
                                          w == "default" && !is(i + 1, ":"))) {
          std::size_t k = i + 1;
          while (k < end && !is(k, ":") && !is(k, "->")) {
            if (is_open(t_[k])) {
              k = skip_group(k);
              continue;
            }
            ++k;
          }
          Stmt s;
          s.kind = StmtKind::kCase;
          s.begin = i;
          s.end = std::min(k + 1, end);
          return s;
        }
      }
      if (w == "if") {
        Stmt s = parse_if(i, end);
        return lang_ == Language::kRust ? rust_block_like(std::move(s), end)
                                        : s;
      }
      if (w == "for") {
        Stmt s = parse_loop(i, end, StmtKind::kFor);
        return lang_ == Language::kRust ? rust_block_like(std::move(s), end)
                                        : s;
      }
      if (w == "while" && lang_ != Language::kGo) {
        Stmt s = parse_loop(i, end, StmtKind::kWhile);
        return lang_ == Language::kRust ? rust_block_like(std::move(s), end)
                                        : s;
      }
      if (w == "do" && (lang_ == Language::kCCpp || lang_ == Language::kJava)) {
        return parse_do(i, end);
      }
      if (w == "switch") {
        if (lang_ == Language::kJava || lang_ == Language::kCCpp) {
          Stmt s = parse_opaque(i, end, StmtKind::kSwitch);
          return s;
        }
        if (lang_ == Language::kGo) return parse_opaque(i, end, StmtKind::kSwitch);
      }
      if (w == "select" && lang_ == Language::kGo) {
        return parse_opaque(i, end, StmtKind::kSwitch);
      }
      if (lang_ == Language::kRust) {
        if (w == "match") {
          return rust_block_like(parse_opaque(i, end, StmtKind::kSwitch), end);
        }
        if (w == "loop" && is(i + 1, "{")) {
          Stmt s;
          s.kind = StmtKind::kLoop;
          s.begin = i;
          Clause c = body_clause(ClauseKind::kBody, i + 1, end);
          c.keyword = i;
          s.end = c.close + 1;
          s.clauses.push_back(std::move(c));
          return rust_block_like(std::move(s), end);
        }
        if (w == "unsafe" && is(i + 1, "{")) {
          Stmt s;
          s.kind = StmtKind::kBlock;
          s.begin = i;
          Clause c = body_clause(ClauseKind::kBody, i + 1, end);
          c.keyword = i;
          s.end = c.close + 1;
          s.clauses.push_back(std::move(c));
          return rust_block_like(std::move(s), end);
        }
        static const std::set<std::string, std::less<>> kItems = {
            "fn", "struct", "enum", "impl", "trait", "mod", "use", "const",
            "static", "type", "extern", "pub"};
        if (kItems.contains(w) && !(w == "const" && is(i + 1, "{"))) {
          // `static`/`const` items end at `;` like simple statements.
          if (w == "use" || w == "const" || w == "static" || w == "type") {
            return parse_simple(i, end);
          }
          return parse_item(i, end);
        }
      }
      if (w == "try" && (lang_ == Language::kJava || lang_ == Language::kCCpp)) {
        return parse_try(i, end);
      }
      if (lang_ == Language::kJava &&
          (w == "class" || w == "interface" || w == "enum" ||
           ((w == "final" || w == "abstract" || w == "static") &&
            (is_kw(i + 1, "class") || is_kw(i + 1, "interface"))))) {
        return parse_item(i, end);
      }
    }
    if (lang_ == Language::kJava && t.kind == TokenKind::kIdentifier &&
        t.text == "record" && i + 2 < end &&
        t_[i + 1].kind == TokenKind::kIdentifier && is(i + 2, "(")) {
      return parse_item(i, end);
    }
    if (lang_ == Language::kRust && t.kind == TokenKind::kIdentifier &&
        t.text == "macro_rules" && is(i + 1, "!")) {
      return parse_item(i, end);
    }
    if (lang_ == Language::kRust && is(i, "#") && is(i + 1, "[")) {
      // Attribute on the following statement: keep them together.
      Stmt next = parse_stmt(match_[i + 1] + 1, end);
      next.begin = i;
      return next;
    }
    return parse_simple(i, end);
  }

  const std::vector<Token>& t_;
  const std::vector<std::size_t>& match_;
  Language lang_;
};

// --------------------------------------------------------- function finder

class FunctionFinder {
 public:
  FunctionFinder(const std::vector<Token>& tokens,
                 const std::vector<std::size_t>& match, Language language)
      : t_(tokens), match_(match), lang_(language) {}

  std::vector<Function> find() {
    switch (lang_) {
      case Language::kGo: scan_go(); break;
      case Language::kRust: scan_rust(0, t_.size(), false); break;
      default: scan_c_like(0, t_.size(), false); break;
    }
    return std::move(out_);
  }

 private:
  bool is(std::size_t i, std::string_view s) const {
    return i < t_.size() && t_[i].is(s);
  }
  bool ident(std::size_t i) const {
    return i < t_.size() && t_[i].kind == TokenKind::kIdentifier;
  }

  void scan_go() {
    const bool main_package = [&] {
      for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
        if (t_[i].is("package")) return t_[i + 1].text == "main";
      }
      return false;
    }();
    std::size_t i = 0;
    while (i < t_.size()) {
      if (!t_[i].is("func")) {
        i = is_open(t_[i]) ? match_[i] + 1 : i + 1;
        continue;
      }
      Function f;
      f.decl_begin = i;
      std::size_t k = i + 1;
      if (is(k, "(")) {
        f.is_method = true;
        k = match_[k] + 1;
      }
      if (!ident(k)) {
        i = k;
        continue;
      }
      f.name = t_[k].text;
      f.name_tok = k;
      ++k;
      if (is(k, "[")) k = match_[k] + 1;  // type parameters
      if (!is(k, "(")) {
        i = k;
        continue;
      }
      f.params_open = k;
      f.params_close = match_[k];
      k = f.params_close + 1;
      while (k < t_.size() && !is(k, "{")) {
        if (t_[k].line_start) break;
        if ((t_[k].is("struct") || t_[k].is("interface")) && is(k + 1, "{")) {
          k = match_[k + 1] + 1;
          continue;
        }
        k = is_open(t_[k]) ? match_[k] + 1 : k + 1;
      }
      if (!is(k, "{")) {
        i = k;
        continue;
      }
      f.body_open = k;
      f.body_close = match_[k];
      f.end = f.body_close + 1;
      const unsigned char c0 = static_cast<unsigned char>(f.name[0]);
      f.is_public = !main_package && c0 >= 'A' && c0 <= 'Z';
      out_.push_back(std::move(f));
      i = out_.back().end;
    }
  }

  void scan_rust(std::size_t begin, std::size_t end, bool in_impl) {
    std::size_t i = begin;
    std::size_t item_start = begin;
    bool pub = false;
    while (i < end) {
      const Token& t = t_[i];
      if (t.is(";") || t.is("}")) {
        ++i;
        item_start = i;
        pub = false;
        continue;
      }
      if (t.is("#") && is(i + 1, "[")) {
        i = match_[i + 1] + 1;
        continue;
      }
      if (t.is("pub")) pub = true;
      if ((t.is("impl") || t.is("mod") || t.is("trait") ||
           t.is("extern")) && t.kind == TokenKind::kKeyword) {
        std::size_t k = i + 1;
        while (k < end && !is(k, "{") && !is(k, ";")) {
          k = (is_open(t_[k]) && !is(k, "{")) ? match_[k] + 1 : k + 1;
        }
        if (is(k, "{")) {
          scan_rust(k + 1, match_[k], t.is("impl") || t.is("trait"));
          i = match_[k] + 1;
          item_start = i;
          pub = false;
          continue;
        }
        i = k;
        continue;
      }
      if (t.is("fn") && ident(i + 1)) {
        Function f;
        f.decl_begin = item_start;
        f.name = t_[i + 1].text;
        f.name_tok = i + 1;
        f.is_method = in_impl;
        f.is_public = pub;
        std::size_t k = i + 2;
        if (is(k, "<")) {
          int depth = 0;
          while (k < end) {
            if (is(k, "<")) ++depth;
            if (is(k, ">")) --depth;
            if (is(k, ">>")) depth -= 2;
            if (is_open(t_[k])) {
              k = match_[k] + 1;
              if (depth <= 0) break;
              continue;
            }
            ++k;
            if (depth <= 0) break;
          }
        }
        if (!is(k, "(")) {
          i = k;
          continue;
        }
        f.params_open = k;
        f.params_close = match_[k];
        k = f.params_close + 1;
        while (k < end && !is(k, "{") && !is(k, ";")) {
          k = is_open(t_[k]) ? match_[k] + 1 : k + 1;
        }
        if (!is(k, "{")) {
          i = k + 1;
          item_start = i;
          pub = false;
          continue;
        }
        f.body_open = k;
        f.body_close = match_[k];
        f.end = f.body_close + 1;
        i = f.end;
        out_.push_back(std::move(f));
        item_start = i;
        pub = false;
        continue;
      }
      if (is_open(t)) {
        i = match_[i] + 1;
        if (t.is("{")) {
          item_start = i;
          pub = false;
        }
        continue;
      }
      ++i;
    }
  }

  static bool type_like(const Token& t) {
    if (t.kind == TokenKind::kIdentifier) return true;
    if (t.kind == TokenKind::kKeyword) {
      static const std::set<std::string, std::less<>> kTypes = {
          "void",  "int",    "char",     "short",  "long",   "float",
          "double", "signed", "unsigned", "bool",  "boolean", "byte",
          "auto",  "const",  "static",   "inline", "struct", "enum",
          "union", "virtual", "explicit", "constexpr", "public", "private",
          "protected", "final", "synchronized", "abstract", "native",
          "strictfp", "extern", "_Bool", "wchar_t", "char8_t",
          "char16_t", "char32_t", "volatile", "register", "typename"};
      return kTypes.contains(t.text);
    }
    return t.is("*") || t.is("&") || t.is("&&") || t.is(">") ||
           t.is(">>") || t.is("]") || t.is("::");
  }

  // Skips tokens between `)` and the body: qualifiers, throws lists,
  // trailing return types, constructor initializer lists. Returns the index
  // of `{` or kNone.
  std::size_t c_body_start(std::size_t k, std::size_t end) const {
    while (k < end) {
      const Token& t = t_[k];
      if (t.is("{")) return k;
      if (t.is(";") || t.is("=") || t.is(",") || t.is(")")) return kNone;
      if (t.is(":")) {
        // Initializer list.
        ++k;
        while (k < end) {
          while (k < end && (ident(k) || is(k, "::") || is(k, "<") ||
                             is(k, ">") || t_[k].kind == TokenKind::kKeyword)) {
            ++k;
          }
          if (!(is(k, "(") || is(k, "{"))) return kNone;
          k = match_[k] + 1;
          if (is(k, ",")) {
            ++k;
            continue;
          }
          return is(k, "{") ? k : kNone;
        }
        return kNone;
      }
      if (t.kind == TokenKind::kPreprocessor) return kNone;
      if (is_open(t)) {
        k = match_[k] + 1;
        continue;
      }
      ++k;
    }
    return kNone;
  }

  std::size_t decl_start(std::size_t name, std::size_t floor) const {
    std::size_t k = name;
    while (k > floor) {
      const Token& p = t_[k - 1];
      if (p.is(";") || p.is("}") || p.is("{") ||
          p.kind == TokenKind::kPreprocessor) {
        break;
      }
      if (p.is(":") && k >= 2 &&
          (t_[k - 2].is("public") || t_[k - 2].is("private") ||
           t_[k - 2].is("protected"))) {
        break;
      }
      if (is_close(p)) {
        // Annotations with arguments, attributes.
        std::size_t open = k - 1;
        while (open > floor && match_[open] != k - 1) --open;
        k = open;
        continue;
      }
      --k;
    }
    return k;
  }

  void scan_c_like(std::size_t begin, std::size_t end, bool in_class) {
    std::size_t i = begin;
    while (i < end) {
      const Token& t = t_[i];
      if (t.kind == TokenKind::kKeyword &&
          (t.text == "namespace" || t.text == "class" || t.text == "struct" ||
           t.text == "union" || t.text == "interface" || t.text == "enum" ||
           t.text == "extern")) {
        // Type or namespace with a body before any `(`, `;` or `=`.
        std::size_t k = i + 1;
        while (k < end && !is(k, "{") && !is(k, "(") && !is(k, ";") &&
               !is(k, "=")) {
          ++k;
        }
        if (is(k, "{")) {
          const bool cls = t.text != "namespace" && t.text != "extern";
          scan_c_like(k + 1, match_[k], cls);
          i = match_[k] + 1;
          continue;
        }
      }
      if (ident(i) && is(i + 1, "(") && i > begin && type_like(t_[i - 1])) {
        const std::size_t close = match_[i + 1];
        const std::size_t body = c_body_start(close + 1, end);
        bool ok = body != kNone;
        if (ok && i > 0 && (t_[i - 1].is(".") || t_[i - 1].is("->"))) ok = false;
        if (ok) {
          Function f;
          f.name = t_[i].text;
          f.name_tok = i;
          f.params_open = i + 1;
          f.params_close = close;
          f.body_open = body;
          f.body_close = match_[body];
          f.end = f.body_close + 1;
          f.decl_begin = decl_start(i, begin);
          f.is_method = in_class;
          bool is_static = false;
          bool is_private = false;
          for (std::size_t k = f.decl_begin; k < i; ++k) {
            if (t_[k].is("static")) is_static = true;
            if (t_[k].is("private")) is_private = true;
          }
          if (lang_ == Language::kJava) {
            f.is_public = !is_private;
          } else {
            f.is_public = in_class;
          }
          (void)is_static;
          out_.push_back(std::move(f));
          i = out_.back().end;
          continue;
        }
      }
      // Constructors in class scope: `Name(...) {` with no return type.
      if (in_class && ident(i) && is(i + 1, "(") &&
          (i == begin || t_[i - 1].is(";") || t_[i - 1].is("}") ||
           t_[i - 1].is("{") || t_[i - 1].is(":") ||
           t_[i - 1].kind == TokenKind::kKeyword)) {
        const std::size_t close = match_[i + 1];
        const std::size_t body = c_body_start(close + 1, end);
        if (body != kNone) {
          Function f;
          f.name = t_[i].text;
          f.name_tok = i;
          f.params_open = i + 1;
          f.params_close = close;
          f.body_open = body;
          f.body_close = match_[body];
          f.end = f.body_close + 1;
          f.decl_begin = decl_start(i, begin);
          f.is_method = true;
          f.is_public = true;
          out_.push_back(std::move(f));
          i = out_.back().end;
          continue;
        }
      }
      if (is_open(t)) {
        i = match_[i] + 1;
        continue;
      }
      ++i;
    }
  }

  const std::vector<Token>& t_;
  const std::vector<std::size_t>& match_;
  Language lang_;
  std::vector<Function> out_;
};

}  // namespace

SourceModel::SourceModel(std::string text, Language language,
                         CDialect dialect)
    : text_(std::move(text)), language_(language), dialect_(dialect) {
  tokens_ = lex(text_, language_);
  match_.assign(tokens_.size(), kNone);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const Token& t = tokens_[i];
    if (is_open(t)) {
      stack.push_back(i);
    } else if (is_close(t)) {
      if (stack.empty()) parse_fail("unmatched '" + t.text + "'", t);
      const std::size_t open = stack.back();
      if (closer_for(tokens_[open].text) != t.text[0]) {
        parse_fail("mismatched '" + t.text + "'", t);
      }
      stack.pop_back();
      match_[open] = i;
      match_[i] = open;
    }
  }
  if (!stack.empty()) {
    parse_fail("unclosed '" + tokens_[stack.back()].text + "'",
               tokens_[stack.back()]);
  }
  if (language_ == Language::kPython) {
    build_python();
  } else {
    build_braces();
  }
}

void SourceModel::build_python() {
  PythonBuilder builder(text_, tokens_, match_);
  top_ = builder.build();
  collect_python_functions(tokens_, top_, false, functions_);
  for (Function& f : functions_) {
    if (f.params_open < tokens_.size() && tokens_[f.params_open].is("(")) {
      f.params_close = match_[f.params_open];
    } else {
      parse_fail("expected '('", tokens_[f.name_tok]);
    }
  }
  const bool tabs = [&] {
    for (const Stmt& s : top_) {
      for (const Clause& c : s.clauses) {
        if (!c.body.empty() && !c.inline_body) {
          const std::size_t b = byte_begin(c.body.front().begin);
          return text_[line_start(b)] == '\t';
        }
      }
    }
    return false;
  }();
  if (tabs) {
    indent_unit_ = "\t";
  } else if (builder.unit() > 0) {
    indent_unit_ = std::string(static_cast<std::size_t>(builder.unit()), ' ');
  }
}

void SourceModel::build_braces() {
  functions_ = FunctionFinder(tokens_, match_, language_).find();
  BraceParser parser(tokens_, match_, language_);
  for (Function& f : functions_) {
    f.body = parser.parse_block(f.body_open + 1, f.body_close);
  }
  indent_unit_ = language_ == Language::kGo ? "\t" : "    ";
  for (const Function& f : functions_) {
    if (f.body.empty()) continue;
    const std::size_t inner = byte_begin(f.body.front().begin);
    const std::size_t outer = byte_begin(f.decl_begin);
    if (!starts_line(f.body.front().begin)) continue;
    const std::string a = line_indent(inner);
    const std::string b = line_indent(outer);
    if (a.size() > b.size() && a.compare(0, b.size(), b) == 0) {
      indent_unit_ = a.substr(b.size());
      break;
    }
  }
}

std::size_t SourceModel::byte_begin(std::size_t tok) const {
  if (tok >= tokens_.size()) return text_.size();
  return tokens_[tok].begin;
}

std::size_t SourceModel::byte_end(std::size_t tok_exclusive_end) const {
  if (tok_exclusive_end == 0) return 0;
  return tokens_[tok_exclusive_end - 1].end;
}

std::size_t SourceModel::line_start(std::size_t pos) const {
  pos = std::min(pos, text_.size());
  while (pos > 0 && text_[pos - 1] != '\n') --pos;
  return pos;
}

std::string SourceModel::line_indent(std::size_t pos) const {
  std::size_t b = line_start(pos);
  std::size_t e = b;
  while (e < text_.size() && (text_[e] == ' ' || text_[e] == '\t')) ++e;
  return text_.substr(b, e - b);
}

bool SourceModel::starts_line(std::size_t tok) const {
  const std::size_t b = tokens_[tok].begin;
  for (std::size_t p = line_start(b); p < b; ++p) {
    if (text_[p] != ' ' && text_[p] != '\t') return false;
  }
  return true;
}

std::string SourceModel::slice(std::size_t begin, std::size_t end) const {
  if (begin >= end) return {};
  const std::size_t b = byte_begin(begin);
  const std::size_t e = byte_end(end);
  return text_.substr(b, e - b);
}

const Function* SourceModel::function_at(std::size_t tok) const {
  const Function* best = nullptr;
  for (const Function& f : functions_) {
    if (tok >= f.decl_begin && tok < f.end) {
      if (!best || f.end - f.decl_begin < best->end - best->decl_begin) {
        best = &f;
      }
    }
  }
  return best;
}

std::string indent_lines(const SourceModel& model, std::size_t begin,
                         std::size_t end, std::string_view prefix) {
  const std::string& text = model.text();
  const std::size_t start = model.line_start(begin);
  // Physical lines beginning inside a multi-line string stay untouched.
  auto inside_string = [&](std::size_t pos) {
    for (const Token& t : model.tokens()) {
      if (t.begin >= pos) break;
      if ((t.kind == TokenKind::kString || t.kind == TokenKind::kChar) &&
          t.begin < pos && pos < t.end) {
        return true;
      }
    }
    return false;
  };
  std::string out;
  std::size_t p = start;
  while (p < end) {
    std::size_t nl = text.find('\n', p);
    const std::size_t line_end = nl == std::string::npos || nl >= end
                                     ? end
                                     : nl + 1;
    std::string_view line(text.data() + p, line_end - p);
    const bool blank = line.find_first_not_of(" \t\r\n") == std::string_view::npos;
    if (!blank && !inside_string(p)) out += prefix;
    out += line;
    p = line_end;
  }
  return out;
}

}  // namespace pk::source

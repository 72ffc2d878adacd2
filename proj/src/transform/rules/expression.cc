#include <cctype>
#include <map>

#include "rule_support.h"

namespace pk::rules {

namespace {

struct HeadSite {
  std::size_t begin;
  std::size_t end;
};

// Conditions of if / else-if / while statements.
std::vector<HeadSite> condition_sites(const SourceModel& m) {
  std::vector<HeadSite> out;
  const Language lang = m.language();
  visit_statements(m, true, [&](const Stmt& s, const Function*) {
    for (const Clause& c : s.clauses) {
      const bool cond_clause =
          c.kind == ClauseKind::kIf || c.kind == ClauseKind::kElif ||
          ((s.kind == StmtKind::kWhile || s.kind == StmtKind::kDoWhile) &&
           c.kind == ClauseKind::kBody);
      if (!cond_clause || c.head_begin == kNone || c.head_begin >= c.head_end) continue;
      if (lang == Language::kGo && s.kind == StmtKind::kWhile) continue;
      if (lang != Language::kPython) {
        if (m.tok(c.head_begin).is("let")) continue;
        if (range_has(m, c.head_begin, c.head_end, ";")) continue;
      }
      out.push_back({c.head_begin, c.head_end});
    }
  });
  // Go `for cond {` loops are parsed as kFor.
  if (lang == Language::kGo) {
    visit_statements(m, false, [&](const Stmt& s, const Function*) {
      if (s.kind != StmtKind::kFor) return;
      const Clause& c = s.clauses[0];
      if (c.head_begin == kNone || c.head_begin >= c.head_end) return;
      if (range_has(m, c.head_begin, c.head_end, ";") ||
          range_has(m, c.head_begin, c.head_end, "range") ||
          range_has(m, c.head_begin, c.head_end, ":=")) {
        return;
      }
      out.push_back({c.head_begin, c.head_end});
    });
  }
  return out;
}

std::string mirror(const std::string& op) {
  static const std::map<std::string, std::string> table = {
      {"<", ">"}, {">", "<"}, {"<=", ">="}, {">=", "<="}, {"==", "=="},
      {"!=", "!="}, {"is", "is"}, {"is not", "is not"}};
  const auto it = table.find(op);
  return it == table.end() ? std::string() : it->second;
}

bool single_token(const Expr& e) { return e.end - e.begin == 1; }

bool has_angle(const SourceModel& m, const Expr& e) {
  return range_has(m, e.begin, e.end, "<") || range_has(m, e.begin, e.end, ">");
}

std::string operand_text(const SourceModel& m, const Expr& e, int prec) {
  const std::string t = m.slice(e.begin, e.end);
  const bool wrap =
      (e.kind == ExprKind::kBinary || e.kind == ExprKind::kTernary) &&
      (e.prec <= prec || m.language() == Language::kRust);
  return wrap ? "(" + t + ")" : t;
}

void swappable(const SourceModel& m, const Expr& e, std::vector<const Expr*>& out) {
  switch (e.kind) {
    case ExprKind::kParen:
      for (const Expr& k : e.kids) swappable(m, k, out);
      return;
    case ExprKind::kUnary:
      if (e.op == "not" || e.op == "!") swappable(m, e.kids[0], out);
      return;
    case ExprKind::kBinary: {
      if (source::is_logical(e.op)) {
        for (const Expr& k : e.kids) swappable(m, k, out);
        return;
      }
      if (e.chained || mirror(e.op).empty()) return;
      const Expr& l = e.kids[0];
      const Expr& r = e.kids[1];
      if (l.has_call && r.has_call) return;
      if (l.has_call && !single_token(r)) return;
      if (r.has_call && !single_token(l)) return;
      if (m.language() != Language::kPython && m.language() != Language::kGo &&
          (has_angle(m, l) || has_angle(m, r))) {
        return;
      }
      out.push_back(&e);
      return;
    }
    default:
      return;
  }
}

Expr parse_or_skip(const SourceModel& m, std::size_t b, std::size_t e, bool& ok) {
  try {
    ok = true;
    return source::parse_expr(m, b, e);
  } catch (const Error&) {
    ok = false;
    return {};
  }
}

}  // namespace

RuleOutput swap_boolean_expression(const RuleInput& in) {
  const SourceModel& m = in.model;
  struct Site {
    HeadSite head;
    Expr expr;
  };
  std::vector<Site> sites;
  for (const HeadSite& h : condition_sites(m)) {
    bool ok;
    Expr e = parse_or_skip(m, h.begin, h.end, ok);
    if (!ok) continue;
    std::vector<const Expr*> found;
    swappable(m, e, found);
    if (!found.empty()) sites.push_back({h, std::move(e)});
  }
  const Site& site = pick(sites, in.rng, "comparison in a condition");
  std::vector<const Expr*> found;
  swappable(m, site.expr, found);
  std::vector<Edit> edits;
  for (const Expr* e : found) {
    const std::string text = operand_text(m, e->kids[1], e->prec) + " " + mirror(e->op) +
                             " " + operand_text(m, e->kids[0], e->prec);
    edits.push_back({m.byte_begin(e->begin), m.byte_end(e->end), text});
  }
  RuleOutput out;
  out.text = apply_edits(m.text(), std::move(edits));
  out.entry_point = entry_name(m, site.head.begin);
  out.note = "mirrored " + std::to_string(found.size()) + " comparison(s)";
  return out;
}

namespace {

std::string negated_comparison(const std::string& op) {
  static const std::map<std::string, std::string> table = {
      {"==", "!="}, {"!=", "=="}, {"is", "is not"}, {"is not", "is"},
      {"in", "not in"}, {"not in", "in"}};
  const auto it = table.find(op);
  return it == table.end() ? std::string() : it->second;
}

std::optional<std::string> equivalent_condition(const SourceModel& m, const Expr& e) {
  if (e.kind != ExprKind::kBinary) return std::nullopt;
  const bool py = m.language() == Language::kPython;
  const std::string a = m.slice(e.kids[0].begin, e.kids[0].end);
  const std::string b = m.slice(e.kids[1].begin, e.kids[1].end);
  if (e.op == "and" || e.op == "&&") {
    return not_wrap(m, not_wrap(m, a) + (py ? " or " : " || ") + not_wrap(m, b));
  }
  if (e.op == "or" || e.op == "||") {
    return not_wrap(m, not_wrap(m, a) + (py ? " and " : " && ") + not_wrap(m, b));
  }
  if (e.chained) return std::nullopt;
  const std::string neg = negated_comparison(e.op);
  if (neg.empty() || (!py && (neg == "is" || neg == "in" || neg == "is not" || neg == "not in"))) {
    return std::nullopt;
  }
  return not_wrap(m, operand_text(m, e.kids[0], e.prec) + " " + neg + " " +
                         operand_text(m, e.kids[1], e.prec));
}

}  // namespace

RuleOutput equi_boolean_logic(const RuleInput& in) {
  const SourceModel& m = in.model;
  std::vector<std::pair<HeadSite, std::string>> sites;
  for (const HeadSite& h : condition_sites(m)) {
    bool ok;
    const Expr e = parse_or_skip(m, h.begin, h.end, ok);
    if (!ok) continue;
    if (auto text = equivalent_condition(m, e)) sites.push_back({h, *text});
  }
  const auto& [head, text] = pick(sites, in.rng, "rewritable condition");
  RuleOutput out;
  out.text = apply_edits(m.text(), {{m.byte_begin(head.begin), m.byte_end(head.end), text}});
  out.entry_point = entry_name(m, head.begin);
  out.note = "rewrote condition into an equivalent form";
  return out;
}

namespace {

bool macro_like(const std::string& name) {
  bool upper = false;
  for (char c : name) {
    if (std::islower(static_cast<unsigned char>(c))) return false;
    upper = upper || std::isupper(static_cast<unsigned char>(c));
  }
  return upper;
}

struct ArithSite {
  Edit edit;
  std::size_t tok;
};

void arith_nodes(const SourceModel& m, const Expr& e, std::vector<ArithSite>& out) {
  for (const Expr& k : e.kids) arith_nodes(m, k, out);
  if (e.kind != ExprKind::kBinary) return;
  const Language lang = m.language();
  const Expr& l = e.kids[0];
  const Expr& r = e.kids[1];
  auto number = [&](const Expr& x) {
    return single_token(x) && m.tok(x.begin).kind == TokenKind::kNumber;
  };
  const std::size_t b = m.byte_begin(e.begin);
  const std::size_t en = m.byte_end(e.end);
  if ((e.op == "*" || (e.op == "+" && lang != Language::kJava)) && number(l) != number(r)) {
    const Expr& lit = number(l) ? l : r;
    const Expr& other = number(l) ? r : l;
    std::string text;
    if (&lit == &l) {
      text = operand_text(m, other, e.prec) + " " + e.op + " " + m.slice(lit.begin, lit.end);
      // Left operand of a left-associative operator needs no parens unless lower.
      if ((other.kind == ExprKind::kBinary || other.kind == ExprKind::kTernary) &&
          other.prec > e.prec && lang != Language::kRust) {
        text = m.slice(other.begin, other.end) + " " + e.op + " " + m.slice(lit.begin, lit.end);
      }
    } else {
      text = m.slice(lit.begin, lit.end) + " " + e.op + " " + operand_text(m, other, e.prec);
    }
    out.push_back({{b, en, text}, e.begin});
    return;
  }
  if (e.op == "-" && number(r) && lang != Language::kGo && lang != Language::kRust) {
    const std::string text = m.slice(l.begin, l.end) + " + (-" + m.slice(r.begin, r.end) + ")";
    out.push_back({{b, en, text}, e.begin});
  }
}

}  // namespace

RuleOutput equi_arithmetic_expression(const RuleInput& in) {
  const SourceModel& m = in.model;
  std::vector<ArithSite> sites;
  auto scan = [&](std::size_t b, std::size_t e) {
    for (const Segment& seg : expression_segments(m, b, e)) {
      if (seg.begin >= 2 && m.tok(seg.begin - 1).is("(") &&
          m.tok(seg.begin - 2).kind == TokenKind::kIdentifier &&
          macro_like(m.tok(seg.begin - 2).text)) {
        continue;
      }
      bool ok;
      const Expr x = parse_or_skip(m, seg.begin, seg.end, ok);
      if (ok) arith_nodes(m, x, sites);
    }
  };
  visit_statements(m, true, [&](const Stmt& s, const Function*) {
    if (s.kind == StmtKind::kSimple) {
      scan(s.begin, s.end);
      return;
    }
    for (const Clause& c : s.clauses) {
      if (c.head_begin != kNone && c.head_begin < c.head_end) scan(c.head_begin, c.head_end);
    }
  });
  const ArithSite& site = pick(sites, in.rng, "arithmetic with a literal operand");
  RuleOutput out;
  out.text = apply_edits(m.text(), {site.edit});
  out.entry_point = entry_name(m, site.tok);
  out.note = "rewrote arithmetic into an equivalent form";
  return out;
}

namespace {

const std::set<std::string>& compound_ops() {
  static const std::set<std::string> ops = {"+=", "-=", "*=", "/=", "//=", "%=", "**=",
                                            "&=", "|=", "^=", "<<=", ">>=", "&^=", "@="};
  return ops;
}

class PyImmutability {
 public:
  PyImmutability(const SourceModel& m, std::size_t b, std::size_t e, const Function* f)
      : m_(m), b_(b), e_(e), f_(f) {}

  bool immutable(const std::string& name, int depth = 0) {
    if (depth > 2) return false;
    if (f_) {
      for (std::size_t i = f_->params_open; i < f_->params_close; ++i) {
        if (m_.tok(i).is_word() && m_.tok(i).text == name) return false;
      }
    }
    bool bound = false;
    for (std::size_t i = b_; i < e_; ++i) {
      const Token& t = m_.tok(i);
      if (!(t.kind == TokenKind::kIdentifier && t.text == name)) continue;
      const Token* p = i > 0 ? &m_.tok(i - 1) : nullptr;
      const Token* n = i + 1 < m_.size() ? &m_.tok(i + 1) : nullptr;
      if (p && p->is(".")) continue;
      if (p && (p->is("global") || p->is("nonlocal") || p->is("as") || p->is("import") ||
                p->is("def") || p->is("class"))) {
        return false;
      }
      if (p && p->is("for")) {
        if (!(n && n->is("in") && i + 2 < m_.size() && m_.tok(i + 2).is("range"))) return false;
        bound = true;
        continue;
      }
      if (!n) continue;
      if (n->is(":=") || (n->is(",") && t.line_start)) return false;
      if (n->is("=") || compound_ops().contains(n->text)) {
        if (p && (p->is("(") || p->is(","))) continue;  // keyword argument
        if (!t.line_start && !(p && (p->is(";") || p->is(":")))) return false;
        if (!rhs_ok(i + 2, name, depth)) return false;
        bound = true;
      }
    }
    return bound;
  }

  bool rhs_ok(std::size_t i, const std::string& self, int depth) {
    static const std::set<std::string> fns = {"len", "int", "float", "abs", "round", "str",
                                              "ord", "bool"};
    for (; i < e_ && !m_.tok(i).line_start && !m_.tok(i).is(";"); ++i) {
      const Token& t = m_.tok(i);
      switch (t.kind) {
        case TokenKind::kNumber:
        case TokenKind::kString:
          continue;
        case TokenKind::kKeyword:
          if (t.is("True") || t.is("False") || t.is("and") || t.is("or") || t.is("not")) continue;
          return false;
        case TokenKind::kIdentifier:
          if (fns.contains(t.text) && i + 1 < e_ && m_.tok(i + 1).is("(")) {
            i = m_.match(i + 1);
            continue;
          }
          if (t.text == self) continue;
          if (!immutable(t.text, depth + 1)) return false;
          continue;
        default: {
          static const std::set<std::string> ops = {"+", "-", "*", "/", "//", "%", "**",
                                                    "(", ")", "<", ">", "==", "!="};
          if (!ops.contains(t.text)) return false;
        }
      }
    }
    return true;
  }

 private:
  const SourceModel& m_;
  std::size_t b_;
  std::size_t e_;
  const Function* f_;
};

bool is_int_literal(const Token& t, bool allow_long) {
  if (t.kind != TokenKind::kNumber) return false;
  for (char c : t.text) {
    if (c == '.' || c == 'e' || c == 'E' || c == 'f' || c == 'F' || c == 'd' || c == 'D') {
      if (t.text.rfind("0x", 0) != 0) return false;
    }
  }
  const char last = t.text.back();
  return allow_long || (last != 'l' && last != 'L');
}

// Declared type of a Java name in [b, e), nearest before `at`.
std::string java_type(const SourceModel& m, const std::string& name, std::size_t at) {
  std::string found;
  for (std::size_t i = 1; i + 1 < m.size() && i < at; ++i) {
    const Token& t = m.tok(i);
    if (!(t.kind == TokenKind::kIdentifier && t.text == name)) continue;
    const Token& n = m.tok(i + 1);
    if (!(n.is("=") || n.is(";") || n.is(",") || n.is(")") || n.is(":"))) continue;
    const Token& p = m.tok(i - 1);
    if (p.is_word() && !p.is("return") && !p.is("new")) found = p.text;
  }
  return found;
}

bool java_expansion_ok(const SourceModel& m, std::size_t lhs, std::size_t rb, std::size_t re) {
  const std::string type = java_type(m, m.tok(lhs).text, lhs);
  if (type == "double" || type == "String") return true;
  if (type != "int" && type != "long") return false;
  const bool is_long = type == "long";
  for (std::size_t i = rb; i < re; ++i) {
    const Token& t = m.tok(i);
    if (t.kind == TokenKind::kNumber) {
      if (!is_int_literal(t, is_long)) return false;
    } else if (t.kind == TokenKind::kIdentifier) {
      const std::string vt = java_type(m, t.text, i);
      if (!(vt == "int" || vt == "short" || vt == "byte" || vt == "char" ||
            (is_long && vt == "long"))) {
        return false;
      }
    } else if (!(t.is("+") || t.is("-") || t.is("*") || t.is("/") || t.is("%") ||
                 t.is("(") || t.is(")"))) {
      return false;
    }
  }
  return true;
}

}  // namespace

RuleOutput modify_operations(const RuleInput& in) {
  const SourceModel& m = in.model;
  const Language lang = m.language();
  struct Site {
    std::size_t lhs_begin, op, rhs_end;
  };
  std::vector<Site> sites;
  visit_statements(m, true, [&](const Stmt& s, const Function* f) {
    if (s.kind != StmtKind::kSimple) return;
    std::size_t op = kNone;
    for (std::size_t i = s.begin; i < s.end; ++i) {
      const Token& t = m.tok(i);
      if ((t.is("(") || t.is("[") || t.is("{")) && m.match(i) != kNone) {
        i = m.match(i);
        continue;
      }
      if (t.kind == TokenKind::kOperator && compound_ops().contains(t.text)) {
        op = i;
        break;
      }
    }
    if (op == kNone || op == s.begin) return;
    std::size_t rhs_end = s.end;
    if (m.tok(rhs_end - 1).is(";")) --rhs_end;
    if (rhs_end <= op + 1) return;
    // Simple left-hand sides only.
    const std::size_t n = op - s.begin;
    const Token& a = m.tok(s.begin);
    bool simple = n == 1 && a.kind == TokenKind::kIdentifier;
    if (lang != Language::kPython && lang != Language::kJava) {
      if (n == 2 && a.is("*") && m.tok(s.begin + 1).kind == TokenKind::kIdentifier) simple = true;
      if (n == 3 && lang != Language::kRust && a.kind == TokenKind::kIdentifier &&
          m.tok(s.begin + 1).is(".") && m.tok(s.begin + 2).kind == TokenKind::kIdentifier) {
        simple = true;
      }
    }
    if (lang != Language::kPython && n == 4 && a.kind == TokenKind::kIdentifier &&
        m.tok(s.begin + 1).is("[") && m.tok(s.begin + 3).is("]") &&
        (m.tok(s.begin + 2).kind == TokenKind::kIdentifier ||
         m.tok(s.begin + 2).kind == TokenKind::kNumber)) {
      simple = true;
    }
    if (!simple) return;
    if (range_has(m, op + 1, rhs_end, "++") || range_has(m, op + 1, rhs_end, "--")) return;
    if (lang == Language::kPython) {
      const std::size_t b = f ? f->body_open : 0;
      const std::size_t e = f ? f->end : m.size();
      PyImmutability check(m, b, e, f);
      if (!f) {
        // Module level: functions must not rebind the name.
        for (const Function& g : m.functions()) {
          if (range_has(m, g.body_open, g.end, "global")) return;
        }
      }
      if (!check.immutable(a.text)) return;
      if (!check.rhs_ok(op + 1, a.text, 0)) return;
    }
    if (lang == Language::kJava && !java_expansion_ok(m, s.begin, op + 1, rhs_end)) return;
    sites.push_back({s.begin, op, rhs_end});
  });
  const Site& site = pick(sites, in.rng, "compound assignment");
  const std::string lhs = m.slice(site.lhs_begin, site.op);
  std::string op = m.tok(site.op).text;
  op.pop_back();
  const std::string rhs = m.slice(site.op + 1, site.rhs_end);
  const bool single = site.rhs_end - site.op == 2;
  const std::string text = lhs + " = " + lhs + " " + op + " " + (single ? rhs : "(" + rhs + ")");
  RuleOutput out;
  out.text = apply_edits(m.text(), {{m.byte_begin(site.lhs_begin), m.byte_end(site.rhs_end), text}});
  out.entry_point = entry_name(m, site.lhs_begin);
  out.note = "expanded compound assignment";
  return out;
}

}  // namespace pk::rules

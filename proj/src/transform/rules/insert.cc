#include "rule_support.h"

namespace pk::rules {

namespace {

bool python_dynamic_scope(const SourceModel& m, const Function* f) {
  if (!f) return false;
  for (const char* w : {"locals", "vars", "exec", "eval"}) {
    if (range_has(m, f->body_open, f->end, w)) return true;
  }
  return false;
}

// Sites before which new statements can go.
std::vector<StmtSite> insertion_sites(const SourceModel& m) {
  std::vector<StmtSite> out;
  for (const StmtSite& s : statement_sites(m)) {
    if (s.function && has_jumps(m, *s.function)) continue;
    if (is_docstring(m, s)) continue;
    if (m.language() == Language::kPython && python_dynamic_scope(m, s.function)) continue;
    out.push_back(s);
  }
  return out;
}

std::string nl_indent(const std::string& indent) { return "\n" + indent; }

RuleOutput insert_before(const RuleInput& in, const StmtSite& site,
                         const std::string& code, const std::string& note) {
  const SourceModel& m = in.model;
  const std::size_t at = m.byte_begin(site.stmt->begin);
  RuleOutput out;
  out.text = apply_edits(m.text(), {{at, at, code + nl_indent(indent_of(m, *site.stmt))}});
  out.entry_point = entry_name(m, site.stmt->begin);
  out.note = note;
  return out;
}

}  // namespace

RuleOutput insert_junk_loop(const RuleInput& in) {
  const SourceModel& m = in.model;
  const std::vector<StmtSite> sites = insertion_sites(m);
  const StmtSite& site = pick(sites, in.rng, "insertion point");
  NamePool pool(m);
  const std::string v = pool.fresh("var", in.rng);
  const std::string ind = indent_of(m, *site.stmt);
  const std::string u = m.indent_unit();
  const bool c = m.language() == Language::kCCpp && m.dialect() == CDialect::kC;
  std::vector<std::string> forms;
  switch (m.language()) {
    case Language::kPython:
      forms = {"for " + v + " in ():\n" + ind + u + "pass",
               "while False:\n" + ind + u + v + " = 0",
               "for " + v + " in []:\n" + ind + u + "break"};
      break;
    case Language::kGo:
      forms = {"for " + v + " := 0; " + v + " < 0; " + v + "++ {\n" + ind + "}",
               "for false {\n" + ind + "}"};
      break;
    case Language::kCCpp:
      forms = {"for (int " + v + " = 0; " + v + " < 0; " + v + "++) {\n" + ind + "}",
               std::string("while (") + (c ? "0" : "false") + ") {\n" + ind + "}"};
      break;
    case Language::kJava:
      forms = {"for (int " + v + " = 0; " + v + " < 0; " + v + "++) {\n" + ind + "}"};
      break;
    case Language::kRust:
      forms = {"for _" + v + " in 0..0 {\n" + ind + "}",
               "while false {\n" + ind + "}"};
      break;
  }
  return insert_before(in, site, pick(forms, in.rng, "loop form"),
                       "inserted dead loop");
}

RuleOutput insert_variables(const RuleInput& in) {
  const SourceModel& m = in.model;
  const std::vector<StmtSite> sites = insertion_sites(m);
  const StmtSite& site = pick(sites, in.rng, "insertion point");
  NamePool pool(m);
  const std::string v = pool.fresh("var", in.rng);
  const std::string ind = indent_of(m, *site.stmt);
  const std::string value = std::to_string(in.rng.uniform_index(100));
  std::string code;
  switch (m.language()) {
    case Language::kPython: code = v + " = " + value; break;
    case Language::kGo: code = v + " := " + value + "\n" + ind + "_ = " + v; break;
    case Language::kCCpp: code = "int " + v + " = " + value + ";\n" + ind + "(void)" + v + ";"; break;
    case Language::kJava: code = "int " + v + " = " + value + ";"; break;
    case Language::kRust: code = "let _" + v + " = " + value + ";"; break;
  }
  return insert_before(in, site, code, "inserted unused variable");
}

RuleOutput insert_junk_function(const RuleInput& in) {
  const SourceModel& m = in.model;
  NamePool pool(m);
  const std::string fn = pool.fresh("func", in.rng);
  const std::string a = pool.fresh("var", in.rng);
  const std::string u = m.indent_unit();
  const int form = static_cast<int>(in.rng.uniform_index(2));
  std::string code;
  std::size_t at = m.text().size();
  std::string lead = m.text().empty() || m.text().back() == '\n' ? "\n" : "\n\n";
  switch (m.language()) {
    case Language::kPython:
      code = form == 0 ? "def " + fn + "(" + a + "):\n" + u + "return " + a + " * 2 + 1\n"
                       : "def " + fn + "(" + a + "):\n" + u + "if " + a + " < 0:\n" + u + u +
                             "return -" + a + "\n" + u + "return " + a + "\n";
      break;
    case Language::kGo:
      code = form == 0 ? "func " + fn + "(" + a + " int) int {\n" + u + "return " + a + "*2 + 1\n}\n"
                       : "func " + fn + "(" + a + " int) int {\n" + u + "if " + a + " < 0 {\n" + u + u +
                             "return -" + a + "\n" + u + "}\n" + u + "return " + a + "\n}\n";
      break;
    case Language::kCCpp:
      code = form == 0 ? "static int " + fn + "(int " + a + ") {\n" + u + "return " + a + " * 2 + 1;\n}\n"
                       : "static int " + fn + "(int " + a + ") {\n" + u + "if (" + a + " < 0) {\n" + u + u +
                             "return -" + a + ";\n" + u + "}\n" + u + "return " + a + ";\n}\n";
      break;
    case Language::kRust:
      code = "#[allow(dead_code)]\n" +
             (form == 0 ? "fn " + fn + "(" + a + ": i64) -> i64 {\n" + u + a + " * 2 + 1\n}\n"
                        : "fn " + fn + "(" + a + ": i64) -> i64 {\n" + u + "if " + a + " < 0 {\n" + u + u +
                              "return -" + a + ";\n" + u + "}\n" + u + a + "\n}\n");
      break;
    case Language::kJava: {
      // Inside the first top-level class, before its closing brace.
      std::size_t close = kNone;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.tok(i).is("class") && i + 1 < m.size()) {
          for (std::size_t k = i; k < m.size(); ++k) {
            if (m.tok(k).is("{")) { close = m.match(k); break; }
          }
          break;
        }
      }
      if (close == kNone) not_applicable("no class to hold a new method");
      at = m.line_start(m.byte_begin(close));
      if (!m.starts_line(close)) at = m.byte_begin(close);
      lead = "\n";
      code = form == 0 ? u + "private static int " + fn + "(int " + a + ") {\n" + u + u + "return " + a +
                             " * 2 + 1;\n" + u + "}\n"
                       : u + "private static int " + fn + "(int " + a + ") {\n" + u + u + "if (" + a +
                             " < 0) {\n" + u + u + u + "return -" + a + ";\n" + u + u + "}\n" + u + u +
                             "return " + a + ";\n" + u + "}\n";
      break;
    }
  }
  RuleOutput out;
  out.text = apply_edits(m.text(), {{at, at, lead + code}});
  out.entry_point = fn;
  out.note = "added unused function " + fn;
  return out;
}

namespace {

bool is_jump(const SourceModel& m, const Stmt& s) {
  const Token& t = m.tok(s.begin);
  return t.is("return") || t.is("break") || t.is("continue") || t.is("goto") ||
         t.is("throw") || t.is("raise") || t.is("yield") || t.is("fallthrough");
}

bool declares(const SourceModel& m, const Stmt& s) {
  const Language lang = m.language();
  if (lang == Language::kGo) {
    return range_has(m, s.begin, s.end, ":=") || m.tok(s.begin).is("var") ||
           m.tok(s.begin).is("const") || m.tok(s.begin).is("type");
  }
  if (lang == Language::kRust) return true;  // handled separately
  // C family / Java: a leading type-like token followed by a name.
  if (s.kind != StmtKind::kSimple) return s.kind == StmtKind::kCompound;
  const Token& a = m.tok(s.begin);
  if (s.end - s.begin < 2) return false;
  const Token& b = m.tok(s.begin + 1);
  if (a.kind == TokenKind::kKeyword) {
    return !(a.is("return") || a.is("delete") || a.is("throw") || a.is("this") ||
             a.is("sizeof") || a.is("new") || a.is("super"));
  }
  if (a.kind == TokenKind::kIdentifier) {
    return b.kind == TokenKind::kIdentifier || b.is("<") || b.is("::") ||
           b.is("*") || b.is("&") || (b.is("[") && s.begin + 2 < s.end &&
                                      m.tok(s.begin + 2).is("]"));
  }
  return false;
}

bool rust_wrappable(const SourceModel& m, const Stmt& s) {
  if (s.tail) return false;
  if (s.kind == StmtKind::kFor || s.kind == StmtKind::kWhile) return true;
  if (s.kind != StmtKind::kSimple) return false;
  if (m.tok(s.begin).is("let") || is_jump(m, s)) return false;
  if (!m.tok(s.end - 1).is(";")) return false;
  static const std::set<std::string> compound = {"+=", "-=", "*=", "/=", "%=",
                                                 "|=", "&=", "^=", "<<=", ">>="};
  for (std::size_t i = s.begin; i < s.end; ++i) {
    const Token& t = m.tok(i);
    if (t.kind == TokenKind::kOperator && compound.contains(t.text)) return true;
    if (t.is("=")) return false;
  }
  return m.tok(s.end - 2).is(")");
}

}  // namespace

RuleOutput statement_wrapping(const RuleInput& in) {
  const SourceModel& m = in.model;
  const Language lang = m.language();
  std::vector<StmtSite> sites;
  for (const StmtSite& s : insertion_sites(m)) {
    const Stmt& st = *s.stmt;
    if (st.kind == StmtKind::kLabel || st.kind == StmtKind::kCase) continue;
    if (lang == Language::kPython) {
      if (m.tok(st.begin).is("global") || m.tok(st.begin).is("nonlocal") ||
          m.tok(st.begin).is("@") || m.tok(st.begin).is("from") ||
          m.tok(st.begin).is("def") || m.tok(st.begin).is("class") ||
          m.tok(st.begin).is("async")) {
        continue;
      }
      if (python_in_class_body(m, s)) continue;
    } else {
      if (s.index + 1 >= s.block->size()) continue;  // never the last statement
      if (is_jump(m, st)) continue;
      if (lang == Language::kRust ? !rust_wrappable(m, st) : declares(m, st)) continue;
      if (m.tok(st.begin).is("do") && lang == Language::kCCpp) {
        // fine: do-while is a complete statement
      }
    }
    sites.push_back(s);
  }
  const StmtSite& site = pick(sites, in.rng, "wrappable statement");
  const Stmt& st = *site.stmt;
  const std::string ind = indent_of(m, st);
  const std::string u = m.indent_unit();
  const std::size_t begin = m.line_start(m.byte_begin(st.begin));
  const std::size_t end = lang == Language::kRust || lang == Language::kPython
                              ? m.byte_end(st.end)
                              : (st.kind == StmtKind::kSimple || st.clauses.empty()
                                     ? m.byte_end(st.end)
                                     : m.byte_end(st.end));
  const std::string body = source::indent_lines(m, begin, end, u);
  std::string head;
  if (lang == Language::kPython) {
    const bool loop_form = !range_has(m, st.begin, st.end, "break") &&
                           !range_has(m, st.begin, st.end, "continue") &&
                           !range_has(m, st.begin, st.end, "yield") && in.rng.coin();
    if (loop_form) {
      NamePool pool(m);
      head = ind + "for " + pool.fresh("var", in.rng) + " in (0,):\n";
    } else {
      head = ind + "if True:\n";
    }
    RuleOutput out;
    out.text = apply_edits(m.text(), {{begin, end, head + body}});
    out.entry_point = entry_name(m, st.begin);
    out.note = "wrapped statement in a guard";
    return out;
  }
  const std::string cond = lang == Language::kGo || lang == Language::kRust
                               ? "if " + true_literal(m) + " {"
                               : "if (" + true_literal(m) + ") {";
  RuleOutput out;
  out.text = apply_edits(m.text(), {{begin, end, ind + cond + "\n" + body + "\n" + ind + "}"}});
  out.entry_point = entry_name(m, st.begin);
  out.note = "wrapped statement in a guard";
  return out;
}

namespace {

// Plain `name = expr` style assignment with no calls or side effects.
// Returns the identifiers it mentions, or nothing if unsuitable.
std::optional<std::set<std::string>> pure_assignment(const SourceModel& m,
                                                     const Stmt& s) {
  if (s.kind != StmtKind::kSimple || s.tail) return std::nullopt;
  const Language lang = m.language();
  std::size_t b = s.begin;
  std::size_t e = s.end;
  if (e > b && m.tok(e - 1).is(";")) --e;
  if (lang == Language::kRust) {
    if (!m.tok(b).is("let")) return std::nullopt;
    ++b;
    if (b < e && m.tok(b).is("mut")) ++b;
  }
  if (lang == Language::kGo && m.tok(b).is("var")) ++b;
  std::size_t op = kNone;
  for (std::size_t i = b; i < e; ++i) {
    if (m.tok(i).is("=") || m.tok(i).is(":=")) { op = i; break; }
  }
  if (op == kNone) return std::nullopt;
  // Target: optional type words then one identifier.
  if (op == b || m.tok(op - 1).kind != TokenKind::kIdentifier) return std::nullopt;
  for (std::size_t i = b; i + 1 < op; ++i) {
    const Token& t = m.tok(i);
    if (lang == Language::kPython || lang == Language::kGo) return std::nullopt;
    if (lang == Language::kRust) {
      if (!(t.is(":") || t.is_word())) return std::nullopt;
    } else if (!t.is_word()) {
      return std::nullopt;
    }
  }
  std::set<std::string> names;
  names.insert(m.tok(op - 1).text);
  for (std::size_t i = op + 1; i < e; ++i) {
    const Token& t = m.tok(i);
    if (t.kind == TokenKind::kIdentifier) {
      if (i + 1 < e && (m.tok(i + 1).is("(") || m.tok(i + 1).is("!"))) return std::nullopt;
      names.insert(t.text);
      continue;
    }
    if (t.kind == TokenKind::kNumber || t.kind == TokenKind::kString ||
        t.kind == TokenKind::kChar) {
      continue;
    }
    if (t.kind == TokenKind::kKeyword) {
      if (t.is("True") || t.is("False") || t.is("None") || t.is("true") ||
          t.is("false") || t.is("nil") || t.is("null")) {
        continue;
      }
      return std::nullopt;
    }
    static const std::set<std::string> ok_ops = {"+", "-", "*", "(", ")", "<", ">",
                                                 "<=", ">=", "==", "!="};
    if (!ok_ops.contains(t.text)) return std::nullopt;
    if (t.is("*") && (i == op + 1 || m.tok(i - 1).kind == TokenKind::kOperator)) {
      return std::nullopt;  // dereference
    }
  }
  return names;
}

}  // namespace

RuleOutput change_statement_order(const RuleInput& in) {
  const SourceModel& m = in.model;
  std::vector<StmtSite> pairs;
  for (const StmtSite& s : insertion_sites(m)) {
    if (s.index + 1 >= s.block->size()) continue;
    const Stmt& a = *s.stmt;
    const Stmt& b = (*s.block)[s.index + 1];
    if (!m.starts_line(b.begin) || m.tok(a.end - 1).line == m.tok(b.begin).line) continue;
    const auto na = pure_assignment(m, a);
    const auto nb = pure_assignment(m, b);
    if (!na || !nb) continue;
    bool disjoint = true;
    for (const std::string& n : *na) disjoint = disjoint && !nb->contains(n);
    if (disjoint) pairs.push_back(s);
  }
  const StmtSite& site = pick(pairs, in.rng, "independent statement pair");
  const Stmt& a = *site.stmt;
  const Stmt& b = (*site.block)[site.index + 1];
  const std::string ta = m.slice(a.begin, a.end);
  const std::string tb = m.slice(b.begin, b.end);
  RuleOutput out;
  out.text = apply_edits(m.text(), {{m.byte_begin(a.begin), m.byte_end(a.end), tb},
                                    {m.byte_begin(b.begin), m.byte_end(b.end), ta}});
  out.entry_point = entry_name(m, a.begin);
  out.note = "swapped two independent assignments";
  return out;
}

}  // namespace pk::rules

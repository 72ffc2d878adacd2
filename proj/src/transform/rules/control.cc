#include "rule_support.h"

namespace pk::rules {

namespace {

struct IfSite {
  const Stmt* stmt;
  const Function* function;
};

bool python_class_scope(const SourceModel& m, const Stmt& s, const Function* f) {
  if (m.language() != Language::kPython || f) return false;
  for (const Stmt& t : m.top_level()) {
    if (&t == &s) return false;
  }
  return m.line_indent(m.byte_begin(s.begin)).size() > 0 &&
         [&] {
           for (const Stmt& t : m.top_level()) {
             if (s.begin > t.begin && s.begin < t.end && m.tok(t.begin).is("class")) return true;
           }
           return false;
         }();
}

std::vector<IfSite> if_sites(const SourceModel& m) {
  std::vector<IfSite> out;
  visit_statements(m, true, [&](const Stmt& s, const Function* f) {
    if (s.kind != StmtKind::kIf || s.clauses.empty()) return;
    if (s.clauses[0].kind != ClauseKind::kIf) return;
    if (!m.starts_line(s.begin)) return;
    if (f && has_jumps(m, *f)) return;
    out.push_back({&s, f});
  });
  return out;
}

std::string head_text(const SourceModel& m, const Clause& c) {
  return m.slice(c.head_begin, c.head_end);
}

bool brace_head_plain(const SourceModel& m, const Clause& c) {
  if (c.head_begin == kNone || c.head_begin >= c.head_end) return false;
  if (m.tok(c.head_begin).is("let")) return false;
  for (std::size_t i = c.head_begin; i < c.head_end; ++i) {
    if (m.tok(i).is(";")) return false;
    if (m.tok(i).is("(") || m.tok(i).is("[") || m.tok(i).is("{")) {
      if (m.match(i) != kNone) i = m.match(i);
    }
  }
  return true;
}

// Parenthesized C-family heads keep their `(`...`)` outside head range.
bool paren_head(const SourceModel& m) {
  return m.language() == Language::kCCpp || m.language() == Language::kJava;
}

std::string if_open(const SourceModel& m, const std::string& kw, const std::string& cond) {
  if (m.language() == Language::kPython) return kw + " " + cond + ":";
  if (paren_head(m)) return kw + " (" + cond + ")";
  return kw + " " + cond;
}

std::size_t body_end_byte(const SourceModel& m, const Clause& c) {
  if (c.close != kNone) return m.tok(c.close).end;
  return m.byte_end(c.body.back().end);
}

RuleOutput finish(const SourceModel& m, std::vector<Edit> edits, std::size_t tok,
                  std::string note) {
  RuleOutput out;
  out.text = apply_edits(m.text(), std::move(edits));
  out.entry_point = entry_name(m, tok);
  out.note = std::move(note);
  return out;
}

}  // namespace

RuleOutput add_condition(const RuleInput& in) {
  const SourceModel& m = in.model;
  std::vector<IfSite> sites;
  for (const IfSite& s : if_sites(m)) {
    const Clause& last = s.stmt->clauses.back();
    if (last.kind == ClauseKind::kElse || last.body.empty()) continue;
    sites.push_back(s);
  }
  const IfSite& site = pick(sites, in.rng, "if without else");
  const Stmt& st = *site.stmt;
  const std::string ind = indent_of(m, st);
  const std::size_t at = clause_chain_end(m, st);
  std::string code;
  if (m.language() == Language::kPython) {
    code = "\n" + ind + "else:\n" + ind + m.indent_unit() + "pass";
  } else {
    code = " else {\n" + ind + "}";
  }
  return finish(m, {{at, at, code}}, st.begin, "added empty else branch");
}

RuleOutput div_if_else(const RuleInput& in) {
  const SourceModel& m = in.model;
  std::vector<std::pair<IfSite, std::size_t>> sites;
  for (const IfSite& s : if_sites(m)) {
    for (std::size_t k = 1; k < s.stmt->clauses.size(); ++k) {
      const Clause& c = s.stmt->clauses[k];
      if (c.kind != ClauseKind::kElif) continue;
      if (m.language() == Language::kPython && !m.starts_line(c.keyword)) continue;
      sites.push_back({s, k});
    }
  }
  const auto& [site, k] = pick(sites, in.rng, "else-if clause");
  const Stmt& st = *site.stmt;
  const Clause& c = st.clauses[k];
  const std::string ind = indent_of(m, st);
  const std::string u = m.indent_unit();
  const std::size_t end = clause_chain_end(m, st);
  if (m.language() == Language::kPython) {
    const std::size_t begin = m.line_start(m.byte_begin(c.keyword));
    std::string body = source::indent_lines(m, begin, end, u);
    const std::size_t at = body.find("elif");
    body.replace(at, 4, "if");
    return finish(m, {{begin, end, ind + "else:\n" + body}}, st.begin,
                  "split else-if into nested if");
  }
  const std::size_t begin = m.byte_begin(c.keyword + 1);
  const std::string code = "{\n" + ind + u + indent_following(m, begin, end, u) + "\n" + ind + "}";
  return finish(m, {{begin, end, code}}, st.begin, "split else-if into nested if");
}

RuleOutput div_composed_if(const RuleInput& in) {
  const SourceModel& m = in.model;
  const Language lang = m.language();
  struct Site {
    const Stmt* stmt;
    Expr cond;
  };
  std::vector<Site> sites;
  for (const IfSite& s : if_sites(m)) {
    const Clause& c = s.stmt->clauses[0];
    if (lang != Language::kPython && !brace_head_plain(m, c)) continue;
    if (c.body.empty()) continue;
    Expr e;
    try {
      e = source::parse_expr(m, c.head_begin, c.head_end);
    } catch (const Error&) {
      continue;
    }
    if (e.kind != ExprKind::kBinary || !source::is_logical(e.op)) continue;
    const bool is_and = e.op == "and" || e.op == "&&";
    if (is_and && s.stmt->clauses.size() != 1) continue;
    if (!is_and) {
      if (lang != Language::kPython && has_labels_in(m, c.open, s.stmt->end)) continue;
      if (range_has(m, c.open, s.stmt->end, "static")) continue;
      if (lang == Language::kPython && c.inline_body == false &&
          !m.starts_line(c.body.front().begin)) {
        continue;
      }
    }
    sites.push_back({s.stmt, std::move(e)});
  }
  const Site& site = pick(sites, in.rng, "if with compound condition");
  const Stmt& st = *site.stmt;
  const Clause& c = st.clauses[0];
  const Expr& e = site.cond;
  const std::string a = m.slice(e.kids[0].begin, e.kids[0].end);
  const std::string b = m.slice(e.kids[1].begin, e.kids[1].end);
  const std::string ind = indent_of(m, st);
  const std::string u = m.indent_unit();
  const std::size_t begin = m.byte_begin(c.keyword);
  const bool is_and = e.op == "and" || e.op == "&&";
  if (is_and) {
    const std::size_t end = clause_chain_end(m, st);
    // Text from the end of the condition (Python `:`, C `)`, Go/Rust `{`).
    std::size_t rest_begin;
    if (lang == Language::kPython) {
      rest_begin = m.byte_begin(c.open);
    } else if (paren_head(m)) {
      rest_begin = m.tok(c.head_end).end;  // after `)`
    } else {
      rest_begin = m.byte_begin(c.open);
    }
    std::string inner = if_open(m, "if", b);
    if (lang == Language::kPython) inner.pop_back();  // `:` comes from the rest
    else if (!paren_head(m)) inner += " ";
    inner += indent_following(m, rest_begin, end, u);
    std::string code;
    if (lang == Language::kPython) {
      code = "if " + a + ":\n" + ind + u + inner;
    } else {
      code = if_open(m, "if", a) + " {\n" + ind + u + inner + "\n" + ind + "}";
    }
    return finish(m, {{begin, end, code}}, st.begin, "split and-condition into nested ifs");
  }
  // or: duplicate the body under an else-if.
  std::string body;
  std::size_t end;
  if (lang == Language::kPython) {
    const std::size_t from = m.byte_begin(c.open) + 1;
    end = m.byte_end(c.body.back().end);
    body = m.text().substr(from, end - from);
    const std::string code = "if " + a + ":" + body + "\n" + ind + "elif " + b + ":" + body;
    return finish(m, {{begin, end, code}}, st.begin, "split or-condition into if / else-if");
  }
  end = body_end_byte(m, c);
  if (c.close != kNone) {
    body = m.text().substr(m.byte_begin(c.open), end - m.byte_begin(c.open));
  } else {
    body = "{ " + m.slice(c.body.front().begin, c.body.back().end) + " }";
  }
  const std::string code = if_open(m, "if", a) + " " + body + " else " + if_open(m, "if", b) + " " + body;
  return finish(m, {{begin, end, code}}, st.begin, "split or-condition into if / else-if");
}

namespace {

bool is_bare_continue(const SourceModel& m, const Stmt& s) {
  if (s.kind != StmtKind::kSimple || !m.tok(s.begin).is("continue")) return false;
  const std::size_t n = s.end - s.begin;
  return n == 1 || (n == 2 && m.tok(s.begin + 1).is(";"));
}

struct LoopBody {
  const std::vector<Stmt>* body;
  const Function* function;
};

std::vector<LoopBody> loop_bodies(const SourceModel& m) {
  std::vector<LoopBody> out;
  visit_statements(m, true, [&](const Stmt& s, const Function* f) {
    if (s.kind != StmtKind::kFor && s.kind != StmtKind::kWhile &&
        s.kind != StmtKind::kDoWhile && s.kind != StmtKind::kLoop) {
      return;
    }
    if (f && has_jumps(m, *f)) return;
    const Clause& c = s.clauses[0];
    if (c.opaque || c.inline_body) return;
    if (m.language() != Language::kPython && c.close == kNone) return;
    out.push_back({&c.body, f});
  });
  return out;
}

}  // namespace

RuleOutput if_continue_to_if_else(const RuleInput& in) {
  const SourceModel& m = in.model;
  std::vector<std::pair<const std::vector<Stmt>*, std::size_t>> sites;
  for (const LoopBody& lb : loop_bodies(m)) {
    const auto& body = *lb.body;
    for (std::size_t k = 0; k + 1 < body.size(); ++k) {
      const Stmt& s = body[k];
      if (s.kind != StmtKind::kIf || s.clauses.size() != 1) continue;
      if (!m.starts_line(s.begin)) continue;
      const Clause& c = s.clauses[0];
      if (c.body.size() != 1 || !is_bare_continue(m, c.body[0])) continue;
      if (!m.starts_line(body[k + 1].begin)) continue;
      sites.push_back({lb.body, k});
    }
  }
  const auto& [body, k] = pick(sites, in.rng, "if-continue guard");
  const Stmt& s = (*body)[k];
  const Clause& c = s.clauses[0];
  const Stmt& cont = c.body[0];
  const std::string ind = indent_of(m, s);
  const std::string u = m.indent_unit();
  const std::size_t rest_end = m.byte_end(body->back().end);
  std::vector<Edit> edits;
  if (m.language() == Language::kPython) {
    edits.push_back({m.byte_begin(cont.begin), m.byte_end(cont.end), "pass"});
    const std::size_t rest_begin = m.line_start(m.byte_begin((*body)[k + 1].begin));
    edits.push_back({rest_begin, rest_end,
                     ind + "else:\n" + source::indent_lines(m, rest_begin, rest_end, u)});
  } else {
    if (c.close != kNone) {
      edits.push_back({m.byte_begin(c.open), m.tok(c.close).end, "{\n" + ind + "}"});
    } else {
      edits.push_back({m.byte_begin(cont.begin), m.byte_end(cont.end), "{\n" + ind + "}"});
    }
    const std::size_t from = clause_chain_end(m, s);
    edits.push_back({from, rest_end,
                     " else {" + indent_following(m, from, rest_end, u) + "\n" + ind + "}"});
  }
  return finish(m, std::move(edits), s.begin, "turned if-continue into if-else");
}

namespace {

// Adds `prefix` after every newline of plain text.
std::string indent_text(const std::string& text, const std::string& prefix) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    out += text[i];
    if (text[i] == '\n' && i + 1 < text.size() && text[i + 1] != '\n') out += prefix;
  }
  return out;
}

bool has_multiline_string(const SourceModel& m, std::size_t b, std::size_t e) {
  for (std::size_t i = b; i < e; ++i) {
    const Token& t = m.tok(i);
    if ((t.kind == TokenKind::kString || t.kind == TokenKind::kChar) &&
        t.text.find('\n') != std::string::npos) {
      return true;
    }
  }
  return false;
}

// Top-level `;`-separated parts of a loop header.
std::vector<std::pair<std::size_t, std::size_t>> header_parts(const SourceModel& m,
                                                              const Clause& c) {
  std::vector<std::pair<std::size_t, std::size_t>> parts;
  std::size_t s = c.head_begin;
  for (std::size_t i = c.head_begin; i < c.head_end; ++i) {
    const Token& t = m.tok(i);
    if ((t.is("(") || t.is("[") || t.is("{")) && m.match(i) != kNone) {
      i = m.match(i);
      continue;
    }
    if (t.is(";")) {
      parts.emplace_back(s, i);
      s = i + 1;
    }
  }
  parts.emplace_back(s, c.head_end);
  return parts;
}

struct LoopSite {
  const Stmt* stmt;
  int form;  // 0 python for, 1 python while, 2 three-clause, 3 brace while, 4 rust for
};

}  // namespace

RuleOutput for_while_transformation(const RuleInput& in) {
  const SourceModel& m = in.model;
  const Language lang = m.language();
  std::vector<LoopSite> sites;
  const bool py_iter_ok = lang == Language::kPython &&
                          !python_binds_name(m, "iter") && !python_binds_name(m, "next") &&
                          !python_binds_name(m, "StopIteration");
  const bool py_int_ok = py_iter_ok && !python_binds_name(m, "int");
  visit_statements(m, true, [&](const Stmt& s, const Function* f) {
    if (s.kind != StmtKind::kFor && s.kind != StmtKind::kWhile) return;
    if (!m.starts_line(s.begin) || s.clauses.size() != 1) return;
    const Clause& c = s.clauses[0];
    if (c.opaque || c.inline_body || c.body.empty()) return;
    if (f && has_jumps(m, *f)) return;
    if (lang == Language::kPython) {
      if (m.tok(s.begin).is("async")) return;
      if (!m.starts_line(c.body.front().begin)) return;
      if (s.kind == StmtKind::kFor && py_iter_ok) sites.push_back({&s, 0});
      if (s.kind == StmtKind::kWhile && py_int_ok) sites.push_back({&s, 1});
      return;
    }
    if (c.close == kNone && lang != Language::kCCpp && lang != Language::kJava) return;
    if (s.begin > 0 && m.tok(s.begin - 1).is(":")) return;  // labelled
    if (m.tok(c.keyword).kind == TokenKind::kLifetime) return;
    if (lang == Language::kRust) {
      if (!m.tok(c.keyword).is("for") && !m.tok(c.keyword).is("while")) return;
      if (c.head_begin == kNone || m.tok(c.head_begin).is("let")) return;
      sites.push_back({&s, s.kind == StmtKind::kFor ? 4 : 3});
      return;
    }
    const auto parts = header_parts(m, c);
    if (s.kind == StmtKind::kWhile || (lang == Language::kGo && parts.size() == 1)) {
      if (c.head_begin == kNone || c.head_begin >= c.head_end) return;
      if (lang == Language::kGo && range_has(m, c.head_begin, c.head_end, "range")) return;
      if (!m.tok(c.keyword).is("while") && !m.tok(c.keyword).is("for")) return;
      sites.push_back({&s, 3});
      return;
    }
    if (parts.size() != 3) return;
    const std::size_t body_begin = c.open == kNone ? c.body.front().begin : c.open;
    if (range_has(m, body_begin, s.end, "continue")) return;
    if (has_multiline_string(m, s.begin, s.end)) return;
    if (lang == Language::kGo && (range_has(m, body_begin, s.end, "func") ||
                                  range_has(m, body_begin, s.end, "go") ||
                                  range_has(m, body_begin, s.end, "defer") ||
                                  range_has(m, body_begin, s.end, "&"))) {
      return;
    }
    sites.push_back({&s, 2});
  });
  const LoopSite& site = pick(sites, in.rng, "convertible loop");
  const Stmt& s = *site.stmt;
  const Clause& c = s.clauses[0];
  const std::string ind = indent_of(m, s);
  const std::string u = m.indent_unit();
  const std::size_t begin = m.byte_begin(s.begin);
  const std::size_t end = clause_chain_end(m, s);
  const std::string& text = m.text();
  NamePool pool(m);

  if (site.form == 0) {
    std::size_t in_tok = c.head_begin;
    while (in_tok < c.head_end && !m.tok(in_tok).is("in")) ++in_tok;
    const std::string target = m.slice(c.head_begin, in_tok);
    const std::string source = m.slice(in_tok + 1, c.head_end);
    const std::string it = pool.fresh("iter", in.rng);
    const std::size_t after = m.tok(c.open).end;
    const std::string code = it + " = iter(" + source + ")\n" + ind + "while True:\n" + ind + u +
                             "try:\n" + ind + u + u + target + " = next(" + it + ")\n" + ind + u +
                             "except StopIteration:\n" + ind + u + u + "break" +
                             text.substr(after, end - after);
    return finish(m, {{begin, end, code}}, s.begin, "rewrote for loop as while loop");
  }
  if (site.form == 1) {
    const std::string v = pool.fresh("var", in.rng);
    const std::size_t after = m.tok(c.open).end;
    const std::string code = "for " + v + " in iter(int, 1):\n" + ind + u + "if not (" +
                             head_text(m, c) + "):\n" + ind + u + u + "break" +
                             text.substr(after, end - after);
    return finish(m, {{begin, end, code}}, s.begin, "rewrote while loop as for loop");
  }
  if (site.form == 3) {
    const std::string cond = head_text(m, c);
    if (lang == Language::kRust) {
      const std::size_t from = m.tok(c.open).end;
      const std::string code = "loop {\n" + ind + u + "if !(" + cond + ") {\n" + ind + u + u +
                               "break;\n" + ind + u + "}" + text.substr(from, end - from);
      return finish(m, {{begin, end, code}}, s.begin, "rewrote while loop as loop");
    }
    if (lang == Language::kGo) {
      const std::size_t from = m.byte_begin(c.head_begin);
      const std::size_t to = m.byte_end(c.head_end);
      return finish(m, {{from, to, "; " + cond + ";"}}, s.begin,
                    "rewrote while-style loop as three-clause loop");
    }
    const std::size_t to = m.tok(c.head_end).end;  // `)`
    return finish(m, {{begin, to, "for (; " + cond + ";)"}}, s.begin,
                  "rewrote while loop as for loop");
  }
  if (site.form == 4) {
    std::size_t in_tok = c.head_begin;
    while (in_tok < c.head_end && !m.tok(in_tok).is("in")) ++in_tok;
    const std::string pat = m.slice(c.head_begin, in_tok);
    const std::string source = m.slice(in_tok + 1, c.head_end);
    const std::string it = "_" + pool.fresh("iter", in.rng);
    const std::size_t from = m.byte_begin(c.open);
    const std::string code = "let mut " + it + " = (" + source + ").into_iter();\n" + ind +
                             "while let Some(" + pat + ") = " + it + ".next() " +
                             text.substr(from, end - from);
    return finish(m, {{begin, end, code}}, s.begin, "rewrote for loop as while-let loop");
  }
  // Three-clause loop into a block holding init and a condition loop.
  const auto parts = header_parts(m, c);
  const std::string init = m.slice(parts[0].first, parts[0].second);
  std::string cond = m.slice(parts[1].first, parts[1].second);
  std::vector<std::string> posts;
  {
    std::size_t s0 = parts[2].first;
    for (std::size_t i = parts[2].first; i <= parts[2].second; ++i) {
      if (i < parts[2].second && (m.tok(i).is("(") || m.tok(i).is("[")) &&
          m.match(i) != kNone) {
        i = m.match(i);
        continue;
      }
      if (i == parts[2].second || m.tok(i).is(",")) {
        if (i > s0) posts.push_back(m.slice(s0, i));
        s0 = i + 1;
      }
    }
  }
  const bool go = lang == Language::kGo;
  const std::string semi = go ? "" : ";";
  if (cond.empty()) cond = go ? "" : true_literal(m);
  std::string inner;
  std::string post_text;
  for (const std::string& p : posts) post_text += ind + u + p + semi + "\n";
  if (c.close != kNone && m.starts_line(c.close)) {
    const std::size_t from = m.tok(c.open).end;
    inner = text.substr(from, m.line_start(m.byte_begin(c.close)) - from);
  } else if (c.close != kNone) {
    inner = " " + m.slice(c.open + 1, c.close) + "\n";
  } else {
    inner = "\n" + ind + u + m.slice(c.body.front().begin, c.body.back().end) + "\n";
  }
  std::string loop = go ? (cond.empty() ? "for {" : "for " + cond + " {")
                        : "while (" + cond + ") {";
  loop += inner + post_text + ind + "}";
  std::string code;
  if (init.empty()) {
    code = loop;
  } else {
    code = "{\n" + ind + u + init + semi + "\n" + ind + u + indent_text(loop, u) + "\n" + ind + "}";
  }
  return finish(m, {{begin, end, code}}, s.begin, "rewrote for loop as condition loop");
}

RuleOutput extract_if(const RuleInput& in) {
  const SourceModel& m = in.model;
  const Language lang = m.language();
  if (lang == Language::kJava || (lang == Language::kCCpp && m.dialect() == CDialect::kC)) {
    not_applicable("no closures to hold the condition");
  }
  std::vector<StmtSite> sites;
  SiteOptions opt;
  opt.include_module = true;
  for (const StmtSite& s : statement_sites(m, opt)) {
    const Stmt& st = *s.stmt;
    if (st.kind != StmtKind::kIf || st.clauses[0].kind != ClauseKind::kIf) continue;
    if (s.function && has_jumps(m, *s.function)) continue;
    if (python_in_class_body(m, s) || python_class_scope(m, st, s.function)) continue;
    const Clause& c = st.clauses[0];
    if (c.head_begin == kNone || c.head_begin >= c.head_end) continue;
    if (lang != Language::kPython && !brace_head_plain(m, c)) continue;
    bool ok = true;
    for (const char* w : {"?", "return", "await", "yield", ":=", "super", "locals",
                          "vars", "break", "continue", "lambda", "<-"}) {
      if (range_has(m, c.head_begin, c.head_end, w)) ok = false;
    }
    if (lang == Language::kRust && range_has(m, c.head_begin, c.head_end, "{")) ok = false;
    if (ok) sites.push_back(s);
  }
  const StmtSite& site = pick(sites, in.rng, "if statement");
  const Stmt& st = *site.stmt;
  const Clause& c = st.clauses[0];
  NamePool pool(m);
  const std::string p = pool.fresh("pred", in.rng);
  const std::string cond = head_text(m, c);
  const std::string ind = indent_of(m, st);
  const std::string u = m.indent_unit();
  std::string def;
  switch (lang) {
    case Language::kPython:
      def = "def " + p + "():\n" + ind + u + "return " + cond + "\n" + ind;
      break;
    case Language::kGo:
      def = p + " := func() bool {\n" + ind + u + "return " + cond + "\n" + ind + "}\n" + ind;
      break;
    case Language::kCCpp:
      def = "auto " + p + " = [&]() -> bool { return " + cond + "; };\n" + ind;
      break;
    case Language::kRust: {
      bool calls = false;
      for (std::size_t i = c.head_begin; i < c.head_end; ++i) calls = calls || m.tok(i).is("(");
      def = std::string("let ") + (calls ? "mut " : "") + p + " = || -> bool { " + cond + " };\n" + ind;
      break;
    }
    case Language::kJava: break;
  }
  const std::size_t at = m.byte_begin(st.begin);
  std::vector<Edit> edits = {{at, at, def},
                             {m.byte_begin(c.head_begin), m.byte_end(c.head_end), p + "()"}};
  RuleOutput out = finish(m, std::move(edits), st.begin, "moved condition into " + p);
  return out;
}

RuleOutput extract_arithmetic(const RuleInput& in) {
  const SourceModel& m = in.model;
  const Language lang = m.language();
  const bool cpp = lang == Language::kCCpp && m.dialect() == CDialect::kCpp;
  if (lang != Language::kPython && !cpp) not_applicable("no closures to hold the expression");
  struct Site {
    const Stmt* stmt;
    Segment seg;
  };
  std::vector<Site> sites;
  SiteOptions opt;
  opt.include_module = true;
  static const std::set<std::string> arith = {"+", "-", "*", "/", "%", "//"};
  for (const StmtSite& s : statement_sites(m, opt)) {
    const Stmt& st = *s.stmt;
    if (st.kind != StmtKind::kSimple) continue;
    if (s.function && has_jumps(m, *s.function)) continue;
    if (python_in_class_body(m, s) || python_class_scope(m, st, s.function) || is_docstring(m, s)) continue;
    bool ok = true;
    const char* banned_py[] = {"for", "lambda", ":=", "yield", "await", "global", "nonlocal",
                               "del", "import", "super", "locals", "vars"};
    const char* banned_cpp[] = {"[", "{", "static", "constexpr", "case", "++", "--",
                                "sizeof", "new", "delete", "co_await", "co_yield"};
    if (lang == Language::kPython) {
      for (const char* w : banned_py) ok = ok && !range_has(m, st.begin, st.end, w);
    } else {
      for (const char* w : banned_cpp) ok = ok && !range_has(m, st.begin, st.end, w);
    }
    if (!ok) continue;
    if (cpp) {
      // Several declarators may refer to each other.
      int depth = 0;
      for (std::size_t i = st.begin; i < st.end; ++i) {
        if (m.tok(i).is("(")) ++depth;
        if (m.tok(i).is(")")) --depth;
        if (depth == 0 && m.tok(i).is(",")) ok = false;
      }
      if (!ok) continue;
    }
    for (const Segment& seg : expression_segments(m, st.begin, st.end)) {
      Expr e;
      try {
        e = source::parse_expr(m, seg.begin, seg.end);
      } catch (const Error&) {
        continue;
      }
      if (e.kind != ExprKind::kBinary || !arith.contains(e.op) || e.has_call) continue;
      bool names = false;
      for (std::size_t i = seg.begin; i < seg.end; ++i) {
        names = names || m.tok(i).kind == TokenKind::kIdentifier;
      }
      if (cpp && seg.begin > 0 && m.tok(seg.begin - 1).is("<<")) continue;
      if (names) sites.push_back({&st, seg});
    }
  }
  const Site& site = pick(sites, in.rng, "arithmetic expression");
  NamePool pool(m);
  const std::string fn = pool.fresh("func", in.rng);
  const std::string expr = m.slice(site.seg.begin, site.seg.end);
  const std::string ind = indent_of(m, *site.stmt);
  std::string def = lang == Language::kPython
                        ? "def " + fn + "():\n" + ind + m.indent_unit() + "return " + expr + "\n" + ind
                        : "auto " + fn + " = [&]() { return " + expr + "; };\n" + ind;
  const std::size_t at = m.byte_begin(site.stmt->begin);
  return finish(m,
                {{at, at, def},
                 {m.byte_begin(site.seg.begin), m.byte_end(site.seg.end), "(" + fn + "())"}},
                site.stmt->begin, "moved arithmetic into " + fn);
}

}  // namespace pk::rules

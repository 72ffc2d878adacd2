#include <algorithm>
#include <cctype>

#include "rule_support.h"

namespace pk::rules {

namespace {

bool is_ident(const Token& t) { return t.kind == TokenKind::kIdentifier; }

const Token* prev_tok(const SourceModel& m, std::size_t i) {
  return i > 0 ? &m.tok(i - 1) : nullptr;
}
const Token* next_tok(const SourceModel& m, std::size_t i) {
  return i + 1 < m.size() ? &m.tok(i + 1) : nullptr;
}

bool is_member_access(const SourceModel& m, std::size_t i) {
  const Token* p = prev_tok(m, i);
  return p && (p->is(".") || p->is("->") || p->is("::") || p->is("?."));
}

bool name_in_text_tokens(const SourceModel& m, std::size_t begin,
                         std::size_t end, const std::string& name) {
  for (std::size_t i = begin; i < end && i < m.size(); ++i) {
    const Token& t = m.tok(i);
    if ((t.kind == TokenKind::kString || t.kind == TokenKind::kPreprocessor ||
         t.kind == TokenKind::kChar) &&
        contains_word(t.text, name)) {
      return true;
    }
  }
  return false;
}

// Rust `S { x, y }` shorthand, where the name is both field and value.
bool struct_shorthand(const SourceModel& m, std::size_t i) {
  if (m.language() != Language::kRust) return false;
  const Token* p = prev_tok(m, i);
  const Token* n = next_tok(m, i);
  return p && n && (p->is("{") || p->is(",")) && (n->is("}") || n->is(","));
}

bool on_import_line(const SourceModel& m, std::size_t i) {
  std::size_t j = i;
  while (j > 0 && !m.tok(j).line_start) --j;
  // Walk back over bracketed continuation lines.
  return m.tok(j).is("import") || m.tok(j).is("from") ||
         (j > 0 && [&] {
           for (std::size_t k = j; k-- > 0;) {
             const Token& t = m.tok(k);
             if (t.is("(") && m.match(k) != kNone && m.match(k) > i) {
               std::size_t s = k;
               while (s > 0 && !m.tok(s).line_start) --s;
               return m.tok(s).is("from") || m.tok(s).is("import");
             }
             if (t.line_start && k + 50 < j) break;
           }
           return false;
         }());
}

bool is_special_function(const std::string& name, Language lang) {
  if (name == "main") return true;
  if (name.rfind("operator", 0) == 0) return true;
  if (lang == Language::kGo && name == "init") return true;
  if (lang == Language::kPython && name.size() > 4 && name.rfind("__", 0) == 0) {
    return true;
  }
  return false;
}

}  // namespace

RuleOutput function_rename(const RuleInput& in) {
  const SourceModel& m = in.model;
  const Language lang = m.language();
  if (lang == Language::kRust && range_has(m, 0, m.size(), "macro_rules")) {
    not_applicable("file defines macros");
  }
  std::vector<std::string> candidates;
  std::set<std::string> seen;
  for (const Function& f : m.functions()) {
    if (!seen.insert(f.name).second) continue;
    bool ok = !is_special_function(f.name, lang) &&
              !source::is_reserved_name(f.name, lang);
    for (const Function& g : m.functions()) {
      if (g.name != f.name) continue;
      if (g.is_public) ok = false;
      if (g.is_method && lang != Language::kJava) ok = false;
      if (lang == Language::kCCpp &&
          (range_has(m, g.decl_begin, g.end, "__func__") ||
           range_has(m, g.decl_begin, g.end, "__FUNCTION__") ||
           range_has(m, g.decl_begin, g.end, "__PRETTY_FUNCTION__"))) {
        ok = false;
      }
    }
    if (!ok) continue;
    if (name_in_text_tokens(m, 0, m.size(), f.name)) continue;
    if (lang == Language::kPython && range_has(m, 0, m.size(), "__name__") &&
        range_has(m, 0, m.size(), "__qualname__")) {
      continue;
    }
    if (lang == Language::kGo && range_has(m, 0, m.size(), "runtime")) continue;
    for (std::size_t i = 0; i < m.size() && ok; ++i) {
      const Token& t = m.tok(i);
      if (!(t.is_word() && t.text == f.name)) continue;
      const Token* p = prev_tok(m, i);
      const Token* n = next_tok(m, i);
      if (p && (p->is(".") || p->is("->") || p->is("?."))) {
        const bool this_call = lang == Language::kJava && i >= 2 &&
                               m.tok(i - 2).is("this");
        if (!this_call) ok = false;
      }
      if (p && p->is("::")) ok = false;
      if (n && (n->is("::") || n->is("!"))) ok = false;
      if (n && n->is(":") && lang != Language::kPython) ok = false;
      if (lang == Language::kPython && n && n->is("=") && p &&
          (p->is("(") || p->is(","))) {
        ok = false;
      }
      if (lang == Language::kPython && on_import_line(m, i)) ok = false;
      if (struct_shorthand(m, i)) ok = false;
    }
    if (lang == Language::kPython &&
        [&] {
          for (std::size_t i = 0; i + 1 < m.size(); ++i) {
            if (m.tok(i).is(".") && m.tok(i + 1).text == "__name__") return true;
          }
          return false;
        }()) {
      ok = false;
    }
    if (ok) candidates.push_back(f.name);
  }
  const std::string& old_name = pick(candidates, in.rng, "renamable function");
  NamePool pool(m);
  const std::string fresh = pool.fresh("func", in.rng);
  std::vector<Edit> edits;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Token& t = m.tok(i);
    if (!(t.is_word() && t.text == old_name)) continue;
    const Token* p = prev_tok(m, i);
    if (p && (p->is(".") || p->is("->")) &&
        !(lang == Language::kJava && i >= 2 && m.tok(i - 2).is("this"))) {
      continue;
    }
    edits.push_back({t.begin, t.end, fresh});
  }
  RuleOutput out;
  out.text = apply_edits(m.text(), std::move(edits));
  out.entry_point = fresh;
  out.renames[old_name] = fresh;
  out.note = "renamed function " + old_name + " to " + fresh;
  return out;
}

namespace {

struct Decl {
  std::string name;
  std::size_t tok;
  std::size_t scope_begin;
  std::size_t scope_end;
};

const std::set<std::string>& c_qualifiers() {
  static const std::set<std::string> q = {
      "const",  "static", "volatile", "register", "final",     "extern",
      "struct", "enum",   "union",    "constexpr", "mutable",  "inline",
      "thread_local", "typename", "class"};
  return q;
}

const std::set<std::string>& c_size_words() {
  static const std::set<std::string> q = {"unsigned", "signed", "long",
                                          "short", "auto", "var"};
  return q;
}

const std::set<std::string>& c_primitives() {
  static const std::set<std::string> q = {
      "int",  "char",    "float", "double", "bool", "void", "boolean",
      "byte", "wchar_t", "char16_t", "char32_t", "char8_t", "_Bool"};
  return q;
}

// Names declared by a C/C++/Java declaration statement in [b, e).
std::vector<std::size_t> c_decl_names(const SourceModel& m, std::size_t b,
                                      std::size_t e) {
  std::vector<std::size_t> names;
  std::size_t i = b;
  bool type_seen = false;
  while (i < e && m.tok(i).is_word() &&
         (c_qualifiers().contains(m.tok(i).text) ||
          c_size_words().contains(m.tok(i).text))) {
    if (c_size_words().contains(m.tok(i).text)) type_seen = true;
    ++i;
  }
  if (i >= e) return names;
  const bool cpp = m.language() == Language::kCCpp;
  auto skip_angles = [&](std::size_t k) -> std::size_t {
    int depth = 0;
    for (; k < e; ++k) {
      const Token& t = m.tok(k);
      if (t.is("<")) ++depth;
      else if (t.is(">")) --depth;
      else if (t.is(">>")) depth -= 2;
      else if (t.is(";") || t.is("{") || t.is("=")) return kNone;
      if (depth <= 0) return k + 1;
    }
    return kNone;
  };
  const Token& first = m.tok(i);
  if (first.kind == TokenKind::kKeyword && c_primitives().contains(first.text)) {
    ++i;
    type_seen = true;
  } else if (!type_seen && is_ident(first)) {
    ++i;
    while (i + 1 < e && (m.tok(i).is("::") || m.tok(i).is(".")) &&
           is_ident(m.tok(i + 1))) {
      i += 2;
    }
    if (i < e && m.tok(i).is("<")) {
      i = skip_angles(i);
      if (i == kNone) return names;
      while (i + 1 < e && m.tok(i).is("::") && is_ident(m.tok(i + 1))) i += 2;
    }
    type_seen = true;
  }
  if (!type_seen) return names;
  while (i < e) {
    while (i < e && (m.tok(i).is("*") || m.tok(i).is("&") ||
                     m.tok(i).is("&&") || m.tok(i).is("const"))) {
      ++i;
    }
    while (i + 1 < e && m.tok(i).is("[") && m.tok(i + 1).is("]")) i += 2;
    if (i >= e || !is_ident(m.tok(i))) return names;
    const std::size_t name = i;
    const Token* n = i + 1 < e ? &m.tok(i + 1) : nullptr;
    const bool ends = n == nullptr || n->is("=") || n->is(";") || n->is(",") ||
                      n->is("[") || n->is(":") || (cpp && (n->is("(") || n->is("{")));
    if (!ends) return names;
    names.push_back(name);
    // Skip the initializer up to the next top-level comma.
    ++i;
    while (i < e && !m.tok(i).is(",")) {
      const Token& t = m.tok(i);
      if ((t.is("(") || t.is("[") || t.is("{")) && m.match(i) != kNone) {
        i = m.match(i) + 1;
        continue;
      }
      if (t.is(";") || t.is(":")) return names;
      ++i;
    }
    if (i >= e) return names;
    ++i;  // comma
  }
  return names;
}

bool lower_ident(const Token& t) {
  return is_ident(t) && (std::islower(static_cast<unsigned char>(t.text[0])) ||
                         t.text[0] == '_');
}

// Identifiers bound by a Rust pattern in [b, e). Empty if the pattern has
// struct fields.
std::vector<std::size_t> rust_pattern_names(const SourceModel& m,
                                            std::size_t b, std::size_t e) {
  std::vector<std::size_t> names;
  for (std::size_t i = b; i < e; ++i) {
    const Token& t = m.tok(i);
    if (t.is("{")) return {};
    if (t.is(":") || t.is("=")) break;
    if (!lower_ident(t) || t.text == "_") continue;
    const Token* n = i + 1 < e ? &m.tok(i + 1) : nullptr;
    const Token* p = i > b ? &m.tok(i - 1) : nullptr;
    if (n && (n->is("(") || n->is("::") || n->is("!"))) continue;
    if (p && p->is("::")) continue;
    names.push_back(i);
  }
  return names;
}

// Go identifiers before `:=` in [b, e).
std::vector<std::size_t> go_short_decl(const SourceModel& m, std::size_t b,
                                       std::size_t e) {
  std::vector<std::size_t> names;
  for (std::size_t i = b; i < e; ++i) {
    const Token& t = m.tok(i);
    if (t.is(":=")) return names;
    if (is_ident(t)) {
      names.push_back(i);
    } else if (!t.is(",")) {
      return {};
    }
  }
  return {};
}

std::vector<std::size_t> go_var_decl(const SourceModel& m, std::size_t b,
                                     std::size_t e) {
  std::vector<std::size_t> names;
  if (b >= e || !m.tok(b).is("var")) return names;
  for (std::size_t i = b + 1; i < e; ++i) {
    if (is_ident(m.tok(i))) names.push_back(i);
    if (i + 1 >= e || !m.tok(i + 1).is(",")) break;
    ++i;
  }
  return names;
}

class DeclCollector {
 public:
  explicit DeclCollector(const SourceModel& m) : m_(m) {}

  std::vector<Decl> run(const Function& f) {
    params(f);
    block(f.body, f.body_close == kNone ? f.end : f.body_close);
    return std::move(decls_);
  }

 private:
  void add(std::size_t tok, std::size_t b, std::size_t e) {
    decls_.push_back({m_.tok(tok).text, tok, b, e});
  }

  void params(const Function& f) {
    if (f.params_open == kNone || f.body_open == kNone) return;
    const std::size_t scope_end = f.body_close == kNone ? f.end : f.body_close;
    std::vector<std::pair<std::size_t, std::size_t>> segs;
    std::size_t s = f.params_open + 1;
    for (std::size_t i = s; i <= f.params_close; ++i) {
      const Token& t = m_.tok(i);
      if (i < f.params_close && (t.is("(") || t.is("[") || t.is("{")) &&
          m_.match(i) != kNone) {
        i = m_.match(i);
        continue;
      }
      if (i < f.params_close && t.is("<") && m_.language() != Language::kGo) {
        int depth = 0;
        for (; i < f.params_close; ++i) {
          if (m_.tok(i).is("<")) ++depth;
          if (m_.tok(i).is(">")) --depth;
          if (m_.tok(i).is(">>")) depth -= 2;
          if (depth <= 0) break;
        }
        continue;
      }
      if (i == f.params_close || t.is(",")) {
        if (i > s) segs.emplace_back(s, i);
        s = i + 1;
      }
    }
    const Language lang = m_.language();
    bool go_named = false;
    if (lang == Language::kGo) {
      for (auto [b, e] : segs) go_named = go_named || e - b >= 2;
    }
    for (auto [b, e] : segs) {
      std::size_t name = kNone;
      if (lang == Language::kGo) {
        if (go_named && is_ident(m_.tok(b))) name = b;
      } else if (lang == Language::kRust) {
        std::size_t k = b;
        if (m_.tok(k).is("mut")) ++k;
        if (k + 1 < e && is_ident(m_.tok(k)) && m_.tok(k + 1).is(":")) name = k;
      } else {
        std::size_t stop = e;
        for (std::size_t k = b; k < e; ++k) {
          if (m_.tok(k).is("=")) { stop = k; break; }
        }
        while (stop > b && m_.tok(stop - 1).is("]")) {
          stop = m_.tok(stop - 2).is("[") ? stop - 2 : b;
        }
        if (stop > b + 1 && is_ident(m_.tok(stop - 1))) name = stop - 1;
      }
      if (name != kNone) add(name, f.body_open, scope_end);
    }
  }

  void simple(const Stmt& s, std::size_t block_end) {
    const Language lang = m_.language();
    if (lang == Language::kGo) {
      for (std::size_t t : go_short_decl(m_, s.begin, s.end)) add(t, s.end, block_end);
      for (std::size_t t : go_var_decl(m_, s.begin, s.end)) add(t, s.end, block_end);
    } else if (lang == Language::kRust) {
      if (m_.tok(s.begin).is("let")) {
        for (std::size_t t : rust_pattern_names(m_, s.begin + 1, s.end)) {
          add(t, s.end, block_end);
        }
      }
    } else {
      for (std::size_t t : c_decl_names(m_, s.begin, s.end)) {
        add(t, t + 1, block_end);
      }
    }
  }

  void head(const Stmt& s, const Clause& c) {
    if (c.head_begin == kNone || c.head_begin >= c.head_end) return;
    const Language lang = m_.language();
    const std::size_t b = c.head_begin;
    const std::size_t e = c.head_end;
    if (lang == Language::kGo) {
      for (std::size_t t : go_short_decl(m_, b, e)) add(t, b, s.end);
    } else if (lang == Language::kRust) {
      if (s.kind == StmtKind::kFor) {
        std::size_t in = b;
        while (in < e && !m_.tok(in).is("in")) ++in;
        for (std::size_t t : rust_pattern_names(m_, b, in)) add(t, c.open, s.end);
      } else if (m_.tok(b).is("let") && c.open != kNone) {
        const std::size_t close = c.close == kNone ? s.end : c.close;
        for (std::size_t t : rust_pattern_names(m_, b + 1, e)) add(t, c.open, close);
      }
    } else if (s.kind == StmtKind::kFor || c.kind == ClauseKind::kExcept ||
               s.kind == StmtKind::kIf || s.kind == StmtKind::kWhile) {
      for (std::size_t t : c_decl_names(m_, b, e)) add(t, t + 1, s.end);
    }
  }

  void block(const std::vector<Stmt>& stmts, std::size_t block_end) {
    for (const Stmt& s : stmts) {
      if (s.kind == StmtKind::kSimple) {
        simple(s, block_end);
        continue;
      }
      for (const Clause& c : s.clauses) {
        head(s, c);
        if (c.opaque) continue;
        block(c.body, c.close == kNone ? s.end : c.close);
      }
    }
  }

  const SourceModel& m_;
  std::vector<Decl> decls_;
};

// Locals of a brace-language function whose every use is inside a local
// declaration scope.
std::vector<std::string> brace_locals(const SourceModel& m, const Function& f) {
  const std::vector<Decl> decls = DeclCollector(m).run(f);
  const std::size_t end = f.body_close == kNone ? f.end : f.body_close;
  std::set<std::string> names;
  for (const Decl& d : decls) names.insert(d.name);
  std::set<std::string> bad;
  std::set<std::size_t> decl_toks;
  for (const Decl& d : decls) decl_toks.insert(d.tok);
  for (const std::string& n : names) {
    if (n == "_" || n == "self" || n == "this") bad.insert(n);
    if (name_in_text_tokens(m, 0, m.size(), n) && m.language() != Language::kJava &&
        m.language() != Language::kGo) {
      bad.insert(n);
    }
    if (m.language() == Language::kCCpp) {
      for (const Token& t : m.tokens()) {
        if (t.kind == TokenKind::kPreprocessor && contains_word(t.text, n)) bad.insert(n);
      }
    }
  }
  for (std::size_t i = f.params_open == kNone ? f.body_open : f.params_open; i < end; ++i) {
    const Token& t = m.tok(i);
    if (!is_ident(t) || !names.contains(t.text)) continue;
    if (is_member_access(m, i)) continue;
    const Token* n = next_tok(m, i);
    if (n && (n->is("::") || n->is("!"))) { bad.insert(t.text); continue; }
    if (struct_shorthand(m, i)) { bad.insert(t.text); continue; }
    if (decl_toks.contains(i)) continue;
    if (n && n->is(":") && !(m.language() == Language::kCCpp &&
                            i > 0 && m.tok(i - 1).is("?"))) {
      bad.insert(t.text);
      continue;
    }
    if (i < f.body_open) continue;  // parameter list text
    const bool covered = std::any_of(decls.begin(), decls.end(), [&](const Decl& d) {
      return d.name == t.text && i >= d.scope_begin && i < d.scope_end;
    });
    if (!covered) bad.insert(t.text);
  }
  std::vector<std::string> out;
  for (const std::string& n : names) {
    if (!bad.contains(n)) out.push_back(n);
  }
  return out;
}

const std::set<std::string>& assign_ops() {
  static const std::set<std::string> ops = {
      "=", "+=", "-=", "*=", "/=", "//=", "%=", "**=", "&=", "|=", "^=",
      ">>=", "<<=", "@=", ":="};
  return ops;
}

std::vector<std::string> python_locals(const SourceModel& m, const Function& f) {
  const std::size_t b = f.body_open + 1;
  const std::size_t e = f.end;
  for (const char* w : {"locals", "vars", "eval", "exec", "globals", "class",
                        "def", "lambda", "super"}) {
    if (range_has(m, b, e, w)) return {};
  }
  std::set<std::string> params;
  for (std::size_t i = f.params_open; i < f.params_close; ++i) {
    if (is_ident(m.tok(i))) params.insert(m.tok(i).text);
  }
  std::set<std::string> bound;
  std::set<std::string> bad;
  auto bind_target = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      const Token& t = m.tok(i);
      if ((t.is("(") || t.is("[")) && m.match(i) != kNone && m.match(i) < to) {
        // Tuple targets in brackets are handled like bare ones.
        continue;
      }
      if (!is_ident(t)) continue;
      const Token* p = prev_tok(m, i);
      const Token* n = next_tok(m, i);
      if (p && p->is(".")) continue;
      if (n && (n->is(".") || n->is("[") || n->is("("))) continue;
      bound.insert(t.text);
    }
  };
  for (std::size_t i = b; i < e; ++i) {
    const Token& t = m.tok(i);
    if (!t.line_start && !(i > 0 && (m.tok(i - 1).is(":") || m.tok(i - 1).is(";")))) {
      if (t.is("as") && i + 1 < e && is_ident(m.tok(i + 1))) bound.insert(m.tok(i + 1).text);
      if (t.is(":=") && i > b && is_ident(m.tok(i - 1))) bound.insert(m.tok(i - 1).text);
      continue;
    }
    if (t.is("global") || t.is("nonlocal")) {
      for (std::size_t k = i + 1; k < e && !m.tok(k).line_start; ++k) {
        if (is_ident(m.tok(k))) bad.insert(m.tok(k).text);
      }
      continue;
    }
    if (t.is("import") || t.is("from")) {
      for (std::size_t k = i + 1; k < e && !m.tok(k).line_start; ++k) {
        if (is_ident(m.tok(k))) bad.insert(m.tok(k).text);
      }
      continue;
    }
    if (t.is("for")) {
      std::size_t k = i + 1;
      while (k < e && !m.tok(k).is("in")) ++k;
      bind_target(i + 1, k);
      continue;
    }
    // Statement start: find a top-level assignment on this logical line.
    std::size_t k = i;
    std::size_t op = kNone;
    for (; k < e; ++k) {
      const Token& u = m.tok(k);
      if (k > i && (u.line_start || u.is(";"))) break;
      if ((u.is("(") || u.is("[") || u.is("{")) && m.match(k) != kNone) {
        k = m.match(k);
        continue;
      }
      if (u.kind == TokenKind::kOperator && assign_ops().contains(u.text)) {
        op = k;
        break;
      }
      if (u.is(":")) break;
    }
    if (op != kNone) bind_target(i, op);
  }
  std::vector<std::string> out;
  for (const std::string& n : bound) {
    if (params.contains(n) || bad.contains(n) || n == "_" || n == "self" ||
        n == "cls" || n.rfind("__", 0) == 0) {
      continue;
    }
    bool ok = !name_in_text_tokens(m, b, e, n);
    for (std::size_t i = b; i < e && ok; ++i) {
      const Token& t = m.tok(i);
      if (!(is_ident(t) && t.text == n)) continue;
      const Token* p = prev_tok(m, i);
      const Token* nx = next_tok(m, i);
      if (nx && nx->is("=") && p && (p->is("(") || p->is(","))) {
        // Keyword argument or a tuple target; only tuple targets are fine.
        std::size_t s = i;
        while (s > b && !m.tok(s).line_start) --s;
        bool inside_call = false;
        for (std::size_t q = s; q < i; ++q) {
          if (m.tok(q).is("(") && m.match(q) != kNone && m.match(q) > i) inside_call = true;
        }
        if (inside_call) ok = false;
      }
    }
    if (ok) out.push_back(n);
  }
  return out;
}

}  // namespace

RuleOutput variables_rename(const RuleInput& in) {
  const SourceModel& m = in.model;
  if (m.language() == Language::kRust && range_has(m, 0, m.size(), "macro_rules")) {
    not_applicable("file defines macros");
  }
  std::vector<std::pair<const Function*, std::vector<std::string>>> candidates;
  for (const Function& f : m.functions()) {
    if (f.body_open == kNone) continue;
    std::vector<std::string> locals = m.language() == Language::kPython
                                          ? python_locals(m, f)
                                          : brace_locals(m, f);
    if (!locals.empty()) candidates.emplace_back(&f, std::move(locals));
  }
  const auto& [fn, locals] = pick(candidates, in.rng, "function with locals");
  NamePool pool(m);
  RuleOutput out;
  for (const std::string& n : locals) out.renames[n] = pool.fresh("var", in.rng);
  std::vector<Edit> edits;
  const std::size_t begin = fn->params_open == kNone ? fn->body_open : fn->params_open;
  const std::size_t end = fn->body_close == kNone ? fn->end : fn->body_close;
  for (std::size_t i = begin; i < end; ++i) {
    const Token& t = m.tok(i);
    if (!is_ident(t) || is_member_access(m, i)) continue;
    const auto it = out.renames.find(t.text);
    if (it == out.renames.end()) continue;
    if (m.language() == Language::kPython) {
      const Token* p = prev_tok(m, i);
      const Token* n = next_tok(m, i);
      if (i < fn->body_open) continue;
      if (n && n->is("=") && p && (p->is("(") || p->is(","))) {
        // Tuple target; keyword arguments were excluded above.
      }
    }
    edits.push_back({t.begin, t.end, it->second});
  }
  out.text = apply_edits(m.text(), std::move(edits));
  out.entry_point = fn->name;
  out.note = "renamed " + std::to_string(locals.size()) + " local(s) in " + fn->name;
  return out;
}

}  // namespace pk::rules

#include <algorithm>
#include <cctype>

#include "rule_support.h"

namespace pk::rules {

std::string apply_edits(std::string_view text, std::vector<Edit> edits) {
  std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
  });
  std::string out;
  std::size_t pos = 0;
  for (const Edit& e : edits) {
    if (e.begin < pos || e.end < e.begin || e.end > text.size()) {
      throw Error(ErrorCode::kEngineFailure, "overlapping rewrite edits");
    }
    out.append(text.substr(pos, e.begin - pos));
    out += e.text;
    pos = e.end;
  }
  out.append(text.substr(pos));
  return out;
}

void not_applicable(const std::string& why) {
  throw Error(ErrorCode::kNotApplicable, why);
}

namespace {

const std::vector<std::string> kAdjectives = {
    "amber", "brisk", "calm",  "dusty", "eager", "fuzzy", "gentle", "hollow",
    "idle",  "jolly", "keen",  "lucky", "mellow", "nimble", "olive", "plain",
    "quiet", "rapid", "sandy", "tidy",  "vivid", "warm",  "young",  "zesty"};
const std::vector<std::string> kNouns = {
    "anchor", "basket", "cactus", "drum",   "ember",  "falcon", "garden",
    "harbor", "island", "jacket", "kettle", "lantern", "meadow", "needle",
    "orchid", "pebble", "quartz", "river",  "saddle", "tunnel", "valley",
    "willow", "yarrow", "zephyr"};
const std::vector<std::string> kVerbs = {
    "compute", "derive", "fetch", "gather", "measure", "probe", "resolve",
    "scan",    "settle", "tally", "trace",  "weigh"};

bool camel_style(Language lang) {
  return lang == Language::kGo || lang == Language::kJava;
}

std::string styled(const std::vector<std::string>& words, Language lang) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (camel_style(lang)) {
      std::string w = words[i];
      if (i > 0) w[0] = static_cast<char>(std::toupper(w[0]));
      out += w;
    } else {
      if (i > 0) out += '_';
      out += words[i];
    }
  }
  return out;
}

}  // namespace

NamePool::NamePool(const SourceModel& model) : language_(model.language()) {
  for (const Token& t : model.tokens()) {
    if (t.is_word()) used_.insert(t.text);
  }
}

bool NamePool::taken(const std::string& name) const {
  return used_.contains(name) || source::is_keyword(name, language_) ||
         source::is_reserved_name(name, language_);
}

std::string NamePool::fresh(std::string_view kind, Rng& rng) {
  for (int attempt = 0;; ++attempt) {
    std::vector<std::string> words;
    if (kind == "func" || kind == "pred") {
      words.push_back(kind == "pred" ? "is" : kVerbs[rng.uniform_index(kVerbs.size())]);
      if (kind == "pred") words.push_back(kAdjectives[rng.uniform_index(kAdjectives.size())]);
      words.push_back(kNouns[rng.uniform_index(kNouns.size())]);
    } else {
      words.push_back(kAdjectives[rng.uniform_index(kAdjectives.size())]);
      words.push_back(kNouns[rng.uniform_index(kNouns.size())]);
    }
    std::string name = styled(words, language_);
    if (attempt > 50) name += std::to_string(attempt);
    if (!taken(name)) {
      used_.insert(name);
      return name;
    }
  }
}

std::string entry_name(const SourceModel& model, std::size_t tok) {
  const Function* f = model.function_at(tok);
  return f ? f->name : "<module>";
}

namespace {

bool is_loop(StmtKind k) {
  return k == StmtKind::kFor || k == StmtKind::kWhile ||
         k == StmtKind::kDoWhile || k == StmtKind::kLoop;
}

// First token after decorators and `async`.
std::size_t head_token(const SourceModel& model, const Stmt& s) {
  std::size_t i = s.begin;
  while (i < s.end && model.tok(i).is("@")) {
    ++i;
    while (i < s.end && !model.tok(i).line_start) ++i;
  }
  if (i < s.end && model.tok(i).is("async")) ++i;
  return i;
}

bool is_class_stmt(const SourceModel& model, const Stmt& s) {
  const std::size_t i = head_token(model, s);
  return i < s.end && model.tok(i).is("class");
}

bool is_def_stmt(const SourceModel& model, const Stmt& s) {
  const std::size_t i = head_token(model, s);
  return i < s.end && model.tok(i).is("def");
}

void collect_sites(const SourceModel& model, const std::vector<Stmt>& block,
                   const Function* fn, bool in_loop, const SiteOptions& opt,
                   std::vector<StmtSite>& out) {
  for (std::size_t i = 0; i < block.size(); ++i) {
    const Stmt& s = block[i];
    const bool usable =
        s.kind != StmtKind::kLabel && s.kind != StmtKind::kCase &&
        (i == 0 || block[i - 1].kind != StmtKind::kLabel) &&
        (!opt.need_line_start || model.starts_line(s.begin));
    if (usable) out.push_back({&s, &block, i, fn, in_loop});
    const bool nested_scope =
        model.language() == Language::kPython &&
        (is_class_stmt(model, s) || is_def_stmt(model, s));
    if (nested_scope) continue;  // functions are visited on their own
    for (const Clause& c : s.clauses) {
      if (c.opaque || c.inline_body) continue;
      if (model.language() != Language::kPython && c.close == kNone) continue;
      collect_sites(model, c.body, fn, in_loop || is_loop(s.kind), opt, out);
    }
  }
}

}  // namespace

std::vector<StmtSite> statement_sites(const SourceModel& model,
                                      const SiteOptions& options) {
  std::vector<StmtSite> out;
  if (options.include_module && model.language() == Language::kPython) {
    collect_sites(model, model.top_level(), nullptr, false, options, out);
  }
  for (const Function& f : model.functions()) {
    if (f.body.empty()) continue;
    if (model.language() == Language::kPython &&
        !model.starts_line(f.body.front().begin)) {
      continue;
    }
    collect_sites(model, f.body, &f, false, options, out);
  }
  return out;
}

void visit_statements(
    const SourceModel& model, bool include_module,
    const std::function<void(const Stmt&, const Function*)>& visit) {
  std::function<void(const std::vector<Stmt>&, const Function*)> walk =
      [&](const std::vector<Stmt>& block, const Function* fn) {
        for (const Stmt& s : block) {
          if (model.language() == Language::kPython &&
              (is_class_stmt(model, s) || is_def_stmt(model, s))) {
            continue;
          }
          visit(s, fn);
          for (const Clause& c : s.clauses) {
            if (!c.opaque) walk(c.body, fn);
          }
        }
      };
  if (include_module && model.language() == Language::kPython) {
    walk(model.top_level(), nullptr);
  }
  for (const Function& f : model.functions()) walk(f.body, &f);
}

bool has_labels_in(const SourceModel& model, std::size_t begin,
                   std::size_t end) {
  const Language lang = model.language();
  if (lang == Language::kPython || lang == Language::kJava ||
      lang == Language::kRust) {
    return false;
  }
  for (std::size_t i = begin; i < end; ++i) {
    const Token& t = model.tok(i);
    if (t.is("goto")) return true;
    if (t.kind == TokenKind::kIdentifier && i + 1 < end &&
        model.tok(i + 1).is(":") && model.starts_line(i)) {
      return true;
    }
  }
  return false;
}

bool has_jumps(const SourceModel& model, const Function& fn) {
  if (fn.body_open == kNone) return false;
  return has_labels_in(model, fn.body_open, fn.end);
}

bool python_in_class_body(const SourceModel& model, const StmtSite& site) {
  return model.language() == Language::kPython && site.function == nullptr &&
         model.line_indent(model.byte_begin(site.stmt->begin)).size() > 0 &&
         [&] {
           for (const Stmt& s : model.top_level()) {
             if (is_class_stmt(model, s) && site.stmt->begin >= s.begin &&
                 site.stmt->begin < s.end) {
               return true;
             }
           }
           return false;
         }();
}

bool is_docstring(const SourceModel& model, const StmtSite& site) {
  return model.language() == Language::kPython && site.index == 0 &&
         site.stmt->kind == StmtKind::kSimple &&
         model.tok(site.stmt->begin).kind == TokenKind::kString;
}

bool range_has(const SourceModel& model, std::size_t begin, std::size_t end,
               std::string_view text) {
  for (std::size_t i = begin; i < end && i < model.size(); ++i) {
    if (model.tok(i).is(text)) return true;
  }
  return false;
}

bool range_has_word(const SourceModel& model, std::size_t begin,
                    std::size_t end, std::string_view word) {
  for (std::size_t i = begin; i < end && i < model.size(); ++i) {
    const Token& t = model.tok(i);
    if (t.is_word() && t.text == word) return true;
    if ((t.kind == TokenKind::kString || t.kind == TokenKind::kPreprocessor) &&
        contains_word(t.text, word)) {
      return true;
    }
  }
  return false;
}

bool contains_word(std::string_view text, std::string_view word) {
  auto ident = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  for (std::size_t p = text.find(word); p != std::string_view::npos;
       p = text.find(word, p + 1)) {
    const bool left = p == 0 || !ident(text[p - 1]);
    const bool right = p + word.size() >= text.size() || !ident(text[p + word.size()]);
    if (left && right) return true;
  }
  return false;
}

std::string indent_of(const SourceModel& model, const Stmt& stmt) {
  return model.line_indent(model.byte_begin(stmt.begin));
}

std::string indent_following(const SourceModel& model, std::size_t begin,
                             std::size_t end, std::string_view prefix) {
  const std::string& text = model.text();
  const std::size_t nl = text.find('\n', begin);
  if (nl == std::string::npos || nl + 1 >= end) {
    return text.substr(begin, end - begin);
  }
  return text.substr(begin, nl + 1 - begin) +
         source::indent_lines(model, nl + 1, end, prefix);
}

std::size_t clause_chain_end(const SourceModel& model, const Stmt& stmt) {
  const Clause& last = stmt.clauses.back();
  if (last.close != kNone) return model.tok(last.close).end;
  if (!last.body.empty()) return model.byte_end(last.body.back().end);
  return model.byte_end(stmt.end);
}

std::string true_literal(const SourceModel& model) {
  switch (model.language()) {
    case Language::kPython: return "True";
    case Language::kCCpp: return model.dialect() == CDialect::kC ? "1" : "true";
    default: return "true";
  }
}

std::string not_wrap(const SourceModel& model, const std::string& inner) {
  if (model.language() == Language::kPython) return "not (" + inner + ")";
  return "!(" + inner + ")";
}

bool python_binds_name(const SourceModel& model, std::string_view name) {
  const auto& toks = model.tokens();
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (!(t.kind == TokenKind::kIdentifier && t.text == name)) continue;
    const Token* prev = i > 0 ? &toks[i - 1] : nullptr;
    const Token* next = i + 1 < toks.size() ? &toks[i + 1] : nullptr;
    if (prev && (prev->is("def") || prev->is("class") || prev->is("as") ||
                 prev->is("import") || prev->is("for") || prev->is("global"))) {
      return true;
    }
    if (prev && prev->is(".")) continue;
    if (next && (next->is("=") || next->is(":=") || next->is(",") ||
                 next->is(":") || next->is("in"))) {
      return true;
    }
  }
  return false;
}

namespace {

bool is_separator(const Token& t, Language lang) {
  if (t.kind == TokenKind::kString || t.kind == TokenKind::kChar) return false;
  static const std::set<std::string> ops = {
      ",", ";", "=", ":=", "+=", "-=", "*=", "/=", "%=", "//=", "**=",
      "&=", "|=", "^=", "<<=", ">>=", "&^=", "@=", ":", "=>", "->", "?", "..."};
  if (t.kind == TokenKind::kOperator) return ops.contains(t.text);
  if (t.kind == TokenKind::kKeyword) {
    static const std::set<std::string> expr_words = {
        "and", "or", "not", "in", "is", "as", "true", "false", "True",
        "False", "None", "nil", "null", "this", "self", "sizeof", "new",
        "await", "instanceof"};
    if (lang == Language::kPython && t.text == "in") return false;
    return !expr_words.contains(t.text);
  }
  return false;
}

bool is_open(const Token& t) {
  return t.kind == TokenKind::kOperator &&
         (t.text == "(" || t.text == "[" || t.text == "{");
}

void segment_range(const SourceModel& model, std::size_t begin,
                   std::size_t end, int depth, std::vector<Segment>& out) {
  std::size_t seg = begin;
  auto flush = [&](std::size_t stop) {
    if (stop > seg) out.push_back({seg, stop, depth});
  };
  for (std::size_t i = begin; i < end; ++i) {
    const Token& t = model.tok(i);
    if (is_open(t)) {
      const std::size_t m = model.match(i);
      if (m != kNone && m < end) {
        segment_range(model, i + 1, m, depth + 1, out);
        i = m;
        continue;
      }
    }
    if (is_separator(t, model.language()) || t.kind == TokenKind::kPreprocessor) {
      flush(i);
      seg = i + 1;
    }
  }
  flush(end);
}

}  // namespace

std::vector<Segment> expression_segments(const SourceModel& model,
                                         std::size_t begin, std::size_t end) {
  std::vector<Segment> out;
  segment_range(model, begin, end, 0, out);
  return out;
}

}  // namespace pk::rules

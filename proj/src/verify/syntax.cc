#include <algorithm>
#include <filesystem>

#include "perturbkit/core/error.h"
#include "perturbkit/source/structure.h"
#include "perturbkit/verify/verify.h"

namespace pk {
namespace {

using source::SourceModel;
using source::TokenKind;

bool needs_main(Language language) {
  return language == Language::kCCpp || language == Language::kGo ||
         language == Language::kRust;
}

bool has_main(const SourceModel& model) {
  return std::any_of(model.functions().begin(), model.functions().end(),
                     [](const source::Function& f) {
                       return f.name == "main" && !f.is_method;
                     });
}

std::string empty_main(const CodeSample& sample) {
  switch (sample.language) {
    case Language::kCCpp:
      return c_dialect(sample) == CDialect::kC ? "int main(void) { return 0; }"
                                               : "int main() { return 0; }";
    case Language::kGo:
      return "func main() {}";
    case Language::kRust:
      return "fn main() {}";
    default:
      return {};
  }
}

// Names of top-level public types in a Java file.
std::vector<std::string> java_public_types(const SourceModel& model) {
  std::vector<std::string> names;
  int depth = 0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& t = model.tok(i);
    if (t.is("{")) ++depth;
    if (t.is("}")) --depth;
    if (depth != 0 || !t.is("public")) continue;
    std::size_t j = i + 1;
    while (j < model.size() &&
           (model.tok(j).is("final") || model.tok(j).is("abstract") ||
            model.tok(j).is("sealed") || model.tok(j).is("strictfp") ||
            model.tok(j).is("static") || model.tok(j).is("non") ||
            model.tok(j).is("-"))) {
      ++j;
    }
    if (j < model.size() && model.tok(j).is("@")) ++j;
    if (j + 1 >= model.size()) continue;
    const auto& kw = model.tok(j);
    if (kw.is("class") || kw.is("interface") || kw.is("enum") ||
        kw.is("record")) {
      if (model.tok(j + 1).kind == TokenKind::kIdentifier) {
        names.push_back(model.tok(j + 1).text);
      }
    }
  }
  return names;
}

std::string describe(const Error& e, const std::string& text) {
  std::string msg = e.what();
  if (e.offset()) {
    const std::size_t off = std::min(*e.offset(), text.size());
    const auto line = std::count(text.begin(), text.begin() + off, '\n') + 1;
    msg += " (line " + std::to_string(line) + ")";
  }
  return msg;
}

}  // namespace

CheckResult syntax_check(const CodeSample& sample) {
  CheckResult result;
  std::optional<SourceModel> model;
  try {
    model.emplace(sample.text, sample.language, c_dialect(sample));
  } catch (const Error& e) {
    result.diagnostics.push_back(describe(e, sample.text));
    return result;
  }
  result.ok = true;
  if (needs_main(sample.language) && !has_main(*model)) {
    result.diagnostics.push_back("no main function; empty main injected");
  }
  if (sample.language == Language::kJava) {
    const auto types = java_public_types(*model);
    if (types.size() > 1) {
      result.ok = false;
      result.diagnostics.push_back("more than one public top-level type");
    } else if (types.size() == 1) {
      const std::string stem = std::filesystem::path(sample.path).stem().string();
      if (sample.path.empty()) {
        result.diagnostics.push_back("no file name recorded; public type " +
                                     types[0] + " requires " + types[0] +
                                     ".java");
      } else if (stem != types[0]) {
        result.ok = false;
        result.diagnostics.push_back("public type " + types[0] +
                                     " must be declared in " + types[0] +
                                     ".java, not " + sample.path);
      }
    }
  }
  return result;
}

std::string compilable_text(const CodeSample& sample, bool* injected) {
  if (injected) *injected = false;
  if (!needs_main(sample.language)) return sample.text;
  try {
    const SourceModel model(sample.text, sample.language, c_dialect(sample));
    if (has_main(model)) return sample.text;
  } catch (const Error&) {
    return sample.text;
  }
  if (injected) *injected = true;
  std::string text = sample.text;
  if (!text.empty() && text.back() != '\n') text += '\n';
  return text + "\n" + empty_main(sample) + "\n";
}

std::string scratch_file_name(const CodeSample& sample) {
  switch (sample.language) {
    case Language::kPython:
      return "main.py";
    case Language::kCCpp:
      return c_dialect(sample) == CDialect::kC ? "main.c" : "main.cpp";
    case Language::kGo:
      return "main.go";
    case Language::kRust:
      return "main.rs";
    case Language::kJava:
      try {
        const SourceModel model(sample.text, sample.language);
        const auto types = java_public_types(model);
        if (!types.empty()) return types[0] + ".java";
      } catch (const Error&) {
      }
      if (std::filesystem::path(sample.path).extension() == ".java") {
        return std::filesystem::path(sample.path).filename().string();
      }
      return "Main.java";
  }
  return "main.txt";
}

}  // namespace pk

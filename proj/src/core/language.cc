#include "perturbkit/core/language.h"

#include <algorithm>
#include <cctype>

#include "perturbkit/core/error.h"

namespace pk {

std::string_view to_string(Language language) {
  switch (language) {
    case Language::kCCpp: return "c_cpp";
    case Language::kGo: return "go";
    case Language::kPython: return "python";
    case Language::kRust: return "rust";
    case Language::kJava: return "java";
  }
  return "unknown";
}

Language parse_language(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "c_cpp" || lower == "c" || lower == "cpp" || lower == "c++" ||
      lower == "c/c++" || lower == "cxx") {
    return Language::kCCpp;
  }
  if (lower == "go" || lower == "golang") return Language::kGo;
  if (lower == "python" || lower == "py" || lower == "python3") {
    return Language::kPython;
  }
  if (lower == "rust" || lower == "rs" || lower == "rust_lang") {
    return Language::kRust;
  }
  if (lower == "java") return Language::kJava;
  throw Error(ErrorCode::kConfigError,
              "unknown language '" + std::string(name) + "'");
}

std::optional<Language> language_from_extension(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const std::string_view ext = path.substr(dot + 1);
  if (ext == "py") return Language::kPython;
  if (ext == "go") return Language::kGo;
  if (ext == "rs") return Language::kRust;
  if (ext == "java") return Language::kJava;
  if (ext == "c" || ext == "h" || ext == "cc" || ext == "cpp" ||
      ext == "cxx" || ext == "hpp" || ext == "hh") {
    return Language::kCCpp;
  }
  return std::nullopt;
}

bool uses_braces(Language language) { return language != Language::kPython; }

}  // namespace pk

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace pk {

// The five language groups. C and C++ share one mode; the dialect only
// matters for syntax validation, toolchain choice and a few rewrites.
enum class Language { kCCpp, kGo, kPython, kRust, kJava };

inline constexpr std::array<Language, 5> kAllLanguages = {
    Language::kCCpp, Language::kGo, Language::kPython, Language::kRust,
    Language::kJava};

enum class CDialect { kC, kCpp };

std::string_view to_string(Language language);
// Accepts canonical names plus common aliases ("c", "cpp", "c++", "golang",
// "py", "rs"). Throws Error(kConfigError) on anything else.
Language parse_language(std::string_view name);
std::optional<Language> language_from_extension(std::string_view path);

// True for every language with brace-delimited blocks (all but Python).
bool uses_braces(Language language);

}  // namespace pk

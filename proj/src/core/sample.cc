#include "perturbkit/core/sample.h"

#include <fstream>
#include <sstream>

#include "perturbkit/core/error.h"

namespace pk {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kOriginal: return "original";
    case Origin::kIntermediate: return "intermediate";
    case Origin::kAccepted: return "accepted";
  }
  return "unknown";
}

void CodeSample::validate() const {
  if (origin == Origin::kOriginal && text.empty()) {
    throw Error(ErrorCode::kCorpusError, "original sample '" + id +
                                             "' has empty text");
  }
  if ((origin == Origin::kOriginal) != lineage.empty()) {
    throw Error(ErrorCode::kCorpusError,
                "sample '" + id +
                    "': lineage must be empty exactly for original samples");
  }
}

CodeSample make_original(std::string id, Language language, std::string text,
                         std::string path) {
  CodeSample sample;
  sample.id = std::move(id);
  sample.language = language;
  sample.text = std::move(text);
  sample.path = std::move(path);
  sample.validate();
  return sample;
}

CodeSample load_sample(const std::filesystem::path& file, std::string id) {
  const auto language = language_from_extension(file.string());
  if (!language) {
    throw Error(ErrorCode::kCorpusError,
                "unknown source extension: " + file.string());
  }
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kCorpusError, "cannot read " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (id.empty()) id = file.filename().string();
  return make_original(std::move(id), *language, text.str(),
                       file.filename().string());
}

CDialect c_dialect(const CodeSample& sample) {
  const std::string& p = sample.path;
  auto ends_with = [&p](std::string_view suffix) {
    return p.size() >= suffix.size() &&
           p.compare(p.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".c")) return CDialect::kC;
  if (ends_with(".cc") || ends_with(".cpp") || ends_with(".cxx") ||
      ends_with(".hpp")) {
    return CDialect::kCpp;
  }
  static constexpr std::string_view kCppMarkers[] = {
      "#include <iostream>", "#include <vector>", "#include <string>",
      "std::", "namespace ", "template <", "template<", "class ",
      "nullptr", "#include <algorithm>", "#include <map>"};
  for (std::string_view marker : kCppMarkers) {
    if (sample.text.find(marker) != std::string::npos) return CDialect::kCpp;
  }
  return CDialect::kC;
}

std::string language_name(const CodeSample& sample) {
  switch (sample.language) {
    case Language::kCCpp: return c_dialect(sample) == CDialect::kC ? "C" : "C++";
    case Language::kGo: return "Go";
    case Language::kPython: return "Python";
    case Language::kRust: return "Rust";
    case Language::kJava: return "Java";
  }
  return "code";
}

}  // namespace pk

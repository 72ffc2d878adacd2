#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "perturbkit/core/language.h"

namespace pk {

enum class Origin { kOriginal, kIntermediate, kAccepted };

std::string_view to_string(Origin origin);

// One source unit. `path` is provenance only (file name on disk or in the
// corpus manifest); it feeds the Java file-name rule and dialect detection.
struct CodeSample {
  std::string id;
  Language language = Language::kPython;
  std::string text;
  Origin origin = Origin::kOriginal;
  std::vector<std::string> lineage;
  std::string path;

  // Checks the origin/lineage/text invariants; throws Error(kCorpusError).
  void validate() const;
};

CodeSample make_original(std::string id, Language language, std::string text,
                         std::string path = {});

// Reads an original sample; the language comes from the file extension and
// the id defaults to the file name. Throws Error(kCorpusError).
CodeSample load_sample(const std::filesystem::path& file, std::string id = {});

CDialect c_dialect(const CodeSample& sample);

// Human-readable language name ("C", "C++", "Go", ...).
std::string language_name(const CodeSample& sample);

}  // namespace pk

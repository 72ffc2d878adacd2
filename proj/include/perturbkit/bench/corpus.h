#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "perturbkit/core/equivalence.h"
#include "perturbkit/core/sample.h"

namespace pk {

struct CorpusEntry {
  CodeSample sample;
  std::optional<EquivalenceSpec> suite;
};

// A .jsonl file of {id, language, content[, inputs]} records, or a
// directory. Directories use manifest.json ([{id, path[, language]
// [, inputs]}]) when present and otherwise every source file found
// recursively, with `<stem>.inputs.json` beside a file as its input suite.
// Entries are sorted by id. Throws Error(kCorpusError).
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path);

// SHA-256 over ids, languages and texts in corpus order, as lowercase hex.
std::string corpus_digest(const std::vector<CorpusEntry>& corpus);

}  // namespace pk

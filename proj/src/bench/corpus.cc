#include "perturbkit/bench/corpus.h"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"
#include "perturbkit/core/error.h"

namespace pk {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kCorpusError, "cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::optional<EquivalenceSpec> suite_beside(const fs::path& file) {
  const fs::path p = file.parent_path() / (file.stem().string() + ".inputs.json");
  if (!fs::exists(p)) return std::nullopt;
  return load_input_suite(p);
}

CodeSample sample_at(const fs::path& file, std::string id,
                     std::optional<Language> language) {
  if (!language) language = language_from_extension(file.string());
  if (!language) {
    throw Error(ErrorCode::kCorpusError, "unknown language for " + file.string());
  }
  return make_original(std::move(id), *language, read_text(file),
                       file.filename().string());
}

std::vector<CorpusEntry> from_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kCorpusError, "cannot read " + path.string());
  std::vector<CorpusEntry> out;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      CorpusEntry e;
      e.sample = make_original(j.at("id").get<std::string>(),
                               parse_language(j.at("language").get<std::string>()),
                               j.at("content").get<std::string>(),
                               j.value("path", std::string{}));
      if (j.contains("inputs")) e.suite = input_suite_from_json(j.at("inputs"));
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::kCorpusError,
                  path.string() + ":" + std::to_string(n) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error(ErrorCode::kCorpusError,
                  path.string() + ":" + std::to_string(n) + ": " + ex.what());
    }
  }
  return out;
}

std::vector<CorpusEntry> from_manifest(const fs::path& dir) {
  std::vector<CorpusEntry> out;
  try {
    const json m = json::parse(read_text(dir / "manifest.json"));
    for (const json& item : m) {
      const fs::path file = dir / item.at("path").get<std::string>();
      std::optional<Language> lang;
      if (item.contains("language")) lang = parse_language(item.at("language").get<std::string>());
      CorpusEntry e;
      e.sample = sample_at(file, item.value("id", item.at("path").get<std::string>()), lang);
      if (item.contains("inputs")) {
        e.suite = load_input_suite(dir / item.at("inputs").get<std::string>());
      } else {
        e.suite = suite_beside(file);
      }
      out.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kCorpusError, "manifest: " + std::string(ex.what()));
  }
  return out;
}

std::vector<CorpusEntry> from_tree(const fs::path& dir) {
  std::vector<CorpusEntry> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (!language_from_extension(entry.path().string())) continue;
    CorpusEntry e;
    e.sample = sample_at(entry.path(),
                         fs::relative(entry.path(), dir).generic_string(),
                         std::nullopt);
    e.suite = suite_beside(entry.path());
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const fs::path& path) {
  std::vector<CorpusEntry> out;
  if (fs::is_directory(path)) {
    out = fs::exists(path / "manifest.json") ? from_manifest(path) : from_tree(path);
  } else if (fs::is_regular_file(path)) {
    out = from_jsonl(path);
  } else {
    throw Error(ErrorCode::kCorpusError, "no corpus at " + path.string());
  }
  std::sort(out.begin(), out.end(), [](const CorpusEntry& a, const CorpusEntry& b) {
    return a.sample.id < b.sample.id;
  });
  std::set<std::string> ids;
  for (const CorpusEntry& e : out) {
    if (!ids.insert(e.sample.id).second) {
      throw Error(ErrorCode::kCorpusError, "duplicate sample id " + e.sample.id);
    }
  }
  return out;
}

std::string corpus_digest(const std::vector<CorpusEntry>& corpus) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  auto feed = [&](std::string_view s) {
    const std::string len = std::to_string(s.size()) + ":";
    EVP_DigestUpdate(ctx.get(), len.data(), len.size());
    EVP_DigestUpdate(ctx.get(), s.data(), s.size());
  };
  for (const CorpusEntry& e : corpus) {
    feed(e.sample.id);
    feed(to_string(e.sample.language));
    feed(e.sample.text);
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &n);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < n; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 15];
  }
  return hex;
}

}  // namespace pk

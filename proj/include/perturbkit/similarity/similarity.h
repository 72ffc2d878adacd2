#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "perturbkit/core/config.h"
#include "perturbkit/core/sample.h"

namespace pk {

// Normalized lexical tokens. Identifiers collapse to "ID", literals to a
// class per kind; keywords and operators stay verbatim.
struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // byte [begin, end)

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

struct SimilarityScore {
  double s1 = 0.0;  // surface
  double s2 = 0.0;  // semantic
  double ss = 0.0;  // combined
};

// Decodes UTF-8; each malformed byte becomes U+FFFD.
std::u32string decode_utf8(std::string_view text);

// Edit distance over code points (bit-parallel).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

double surface_similarity(std::string_view a, std::string_view b);

TokenStream tokenize(std::string_view text, Language language);
TokenStream tokenize(const CodeSample& sample);

// Number of tokens covered by greedy string tiling, counted on one side (the
// count is the same on both). Tiles shorter than min_tile_len are ignored.
std::size_t tiled_tokens(const std::vector<std::string>& a,
                         const std::vector<std::string>& b,
                         std::size_t min_tile_len);

// 2 * tiled / (|a| + |b|). Throws Error(kEmptyStream) if both are empty.
double semantic_similarity(const TokenStream& a, const TokenStream& b,
                           std::size_t min_tile_len);

double combined_score(double s1, double s2, const PesoConfig& config);

// Throws Error(kLanguageMismatch) if the languages differ.
SimilarityScore score_pair(const CodeSample& original,
                           const CodeSample& candidate,
                           const PesoConfig& config);

}  // namespace pk

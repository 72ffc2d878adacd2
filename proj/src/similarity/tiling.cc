#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "perturbkit/core/error.h"
#include "perturbkit/similarity/similarity.h"
#include "perturbkit/source/lexer.h"

namespace pk {

namespace {

std::string normalize(const source::Token& token) {
  using source::TokenKind;
  switch (token.kind) {
    case TokenKind::kIdentifier: return "ID";
    case TokenKind::kNumber: return "NUM";
    case TokenKind::kString: return "STR";
    case TokenKind::kChar: return "CHR";
    case TokenKind::kLifetime: return "LIFETIME";
    case TokenKind::kPreprocessor: {
      // Keep only the directive name: "#include", "#define", ...
      std::size_t p = 1;
      while (p < token.text.size() &&
             (token.text[p] == ' ' || token.text[p] == '\t')) {
        ++p;
      }
      std::size_t q = p;
      while (q < token.text.size() &&
             std::isalpha(static_cast<unsigned char>(token.text[q]))) {
        ++q;
      }
      return "#" + token.text.substr(p, q - p);
    }
    case TokenKind::kKeyword:
    case TokenKind::kOperator:
      return token.text;
  }
  return token.text;
}

struct TilingRun {
  std::size_t covered = 0;
  bool had_conflict = false;
};

// Greedy string tiling. Each round finds the longest match between unmarked
// runs, then marks every match of that length in (i, j) order, skipping ones
// that overlap a tile marked earlier in the same round.
TilingRun tile(const std::vector<std::uint32_t>& a,
               const std::vector<std::uint32_t>& b, std::size_t min_len) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<char> mark_a(n, 0);
  std::vector<char> mark_b(m, 0);
  TilingRun run;
  std::vector<std::uint32_t> next_row(m + 1);
  std::vector<std::uint32_t> row(m + 1);

  // Fills `row` for position i given `next_row` for i + 1.
  auto fill = [&](std::size_t i) {
    row[m] = 0;
    for (std::size_t j = m; j-- > 0;) {
      row[j] = (!mark_a[i] && !mark_b[j] && a[i] == b[j]) ? next_row[j + 1] + 1
                                                          : 0;
    }
  };

  while (true) {
    std::uint32_t best = 0;
    std::fill(next_row.begin(), next_row.end(), 0);
    for (std::size_t i = n; i-- > 0;) {
      fill(i);
      for (std::size_t j = 0; j < m; ++j) best = std::max(best, row[j]);
      std::swap(row, next_row);
    }
    if (best < min_len || best == 0) break;

    std::vector<std::pair<std::size_t, std::size_t>> starts;
    std::fill(next_row.begin(), next_row.end(), 0);
    for (std::size_t i = n; i-- > 0;) {
      fill(i);
      for (std::size_t j = m; j-- > 0;) {
        if (row[j] == best) starts.emplace_back(i, j);
      }
      std::swap(row, next_row);
    }
    std::reverse(starts.begin(), starts.end());
    for (auto [i, j] : starts) {
      bool free = true;
      for (std::size_t k = 0; k < best && free; ++k) {
        free = !mark_a[i + k] && !mark_b[j + k];
      }
      if (!free) {
        run.had_conflict = true;
        continue;
      }
      for (std::size_t k = 0; k < best; ++k) {
        mark_a[i + k] = 1;
        mark_b[j + k] = 1;
      }
      run.covered += best;
    }
  }
  return run;
}

}  // namespace

TokenStream tokenize(std::string_view text, Language language) {
  TokenStream out;
  for (const source::Token& token : source::lex(text, language)) {
    out.tokens.push_back(normalize(token));
    out.spans.emplace_back(token.begin, token.end);
  }
  return out;
}

TokenStream tokenize(const CodeSample& sample) {
  return tokenize(sample.text, sample.language);
}

std::size_t tiled_tokens(const std::vector<std::string>& a,
                         const std::vector<std::string>& b,
                         std::size_t min_tile_len) {
  std::unordered_map<std::string, std::uint32_t> ids;
  auto intern = [&](const std::vector<std::string>& tokens) {
    std::vector<std::uint32_t> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
      out.push_back(ids.emplace(t, static_cast<std::uint32_t>(ids.size()))
                        .first->second);
    }
    return out;
  };
  const auto ia = intern(a);
  const auto ib = intern(b);
  const std::size_t min_len = std::max<std::size_t>(min_tile_len, 1);
  const TilingRun forward = tile(ia, ib, min_len);
  if (!forward.had_conflict) return forward.covered;
  // Tie order can matter once tiles collide; take the better orientation so
  // the score stays symmetric.
  return std::max(forward.covered, tile(ib, ia, min_len).covered);
}

double semantic_similarity(const TokenStream& a, const TokenStream& b,
                           std::size_t min_tile_len) {
  if (a.empty() && b.empty()) {
    throw Error(ErrorCode::kEmptyStream, "both token streams are empty");
  }
  if (a.empty() || b.empty()) return 0.0;
  if (a.tokens == b.tokens) return 1.0;
  const double covered =
      static_cast<double>(tiled_tokens(a.tokens, b.tokens, min_tile_len));
  return 2.0 * covered / static_cast<double>(a.size() + b.size());
}

double combined_score(double s1, double s2, const PesoConfig& config) {
  const double ss = config.mu * s1 + config.nu * s2;
  return std::clamp(ss, 0.0, 1.0);
}

SimilarityScore score_pair(const CodeSample& original,
                           const CodeSample& candidate,
                           const PesoConfig& config) {
  if (original.language != candidate.language) {
    throw Error(ErrorCode::kLanguageMismatch,
                "cannot compare " + std::string(to_string(original.language)) +
                    " with " + std::string(to_string(candidate.language)));
  }
  SimilarityScore score;
  score.s1 = surface_similarity(original.text, candidate.text);
  score.s2 = semantic_similarity(tokenize(original), tokenize(candidate),
                                 static_cast<std::size_t>(config.min_tile_len));
  score.ss = combined_score(score.s1, score.s2, config);
  return score;
}

}  // namespace pk

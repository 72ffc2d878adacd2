#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "perturbkit/core/error.h"
#include "perturbkit/core/rng.h"
#include "perturbkit/similarity/similarity.h"
#include "support/oracles.h"
#include "support/test_support.h"

namespace pk {
namespace {

using testing::brute_tiling;
using testing::dp_levenshtein;
using testing::dp_surface;
using testing::fixture_dir;

std::string random_text(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces = {"a", "b", "c", " ", "\n", "(", "é", "λ"};
  std::string out;
  const std::size_t n = rng.uniform_index(max_len + 1);
  while (decode_utf8(out).size() < n) out += pieces[rng.uniform_index(pieces.size())];
  return out;
}

std::vector<std::string> random_stream(Rng& rng, std::size_t max_len, std::size_t alphabet) {
  std::vector<std::string> out(rng.uniform_index(max_len + 1));
  for (auto& t : out) t = "t" + std::to_string(rng.uniform_index(alphabet));
  return out;
}

TokenStream stream_of(std::vector<std::string> tokens) {
  TokenStream s;
  for (std::size_t i = 0; i < tokens.size(); ++i) s.spans.emplace_back(i, i + 1);
  s.tokens = std::move(tokens);
  return s;
}

PesoConfig even_weights() { return PesoConfig{}; }

TEST(Surface, Examples) {
  EXPECT_DOUBLE_EQ(surface_similarity("abc", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(surface_similarity("", "xyz"), 0.0);
  EXPECT_DOUBLE_EQ(surface_similarity("", ""), 1.0);
  EXPECT_NEAR(surface_similarity("kitten", "sitting"), 1.0 - 3.0 / 7.0, 1e-12);
  EXPECT_NEAR(surface_similarity("kitten", "sitting"), 0.5714, 1e-4);
}

TEST(Surface, MatchesDynamicProgrammingOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string a = random_text(rng, 64);
    const std::string b = random_text(rng, 64);
    const std::u32string ua = decode_utf8(a);
    const std::u32string ub = decode_utf8(b);
    ASSERT_EQ(levenshtein(ua, ub), dp_levenshtein(ua, ub)) << a << " | " << b;
    ASSERT_DOUBLE_EQ(surface_similarity(a, b), dp_surface(a, b));
  }
}

TEST(Surface, LongInputsMatchOracle) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const std::string a = random_text(rng, 300);
    const std::string b = random_text(rng, 300);
    ASSERT_EQ(levenshtein(decode_utf8(a), decode_utf8(b)),
              dp_levenshtein(decode_utf8(a), decode_utf8(b)));
  }
}

TEST(Surface, SymmetricAndInRange) {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string a = random_text(rng, 40);
    const std::string b = random_text(rng, 40);
    const double s = surface_similarity(a, b);
    EXPECT_DOUBLE_EQ(s, surface_similarity(b, a));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Surface, MalformedUtf8BecomesReplacement) {
  const std::u32string decoded = decode_utf8("a\xff" "b");
  ASSERT_EQ(decoded.size(), 3u);
  EXPECT_EQ(decoded[1], U'�');
}

TEST(Semantic, Examples) {
  std::vector<std::string> twenty;
  for (int i = 0; i < 20; ++i) twenty.push_back("t" + std::to_string(i % 7));
  EXPECT_DOUBLE_EQ(semantic_similarity(stream_of(twenty), stream_of(twenty), 9), 1.0);

  std::vector<std::string> left(20, "x");
  std::vector<std::string> right(20, "y");
  EXPECT_DOUBLE_EQ(semantic_similarity(stream_of(left), stream_of(right), 9), 0.0);
}

TEST(Semantic, SharedRunOfTen) {
  std::vector<std::string> run;
  for (int i = 0; i < 10; ++i) run.push_back("r" + std::to_string(i));
  std::vector<std::string> a;
  for (int i = 0; i < 5; ++i) a.push_back("a" + std::to_string(i));
  a.insert(a.end(), run.begin(), run.end());
  for (int i = 5; i < 10; ++i) a.push_back("a" + std::to_string(i));
  std::vector<std::string> b;
  for (int i = 0; i < 12; ++i) b.push_back("b" + std::to_string(i));
  b.insert(b.end(), run.begin(), run.end());
  for (int i = 12; i < 20; ++i) b.push_back("b" + std::to_string(i));
  ASSERT_EQ(a.size(), 20u);
  ASSERT_EQ(b.size(), 30u);
  EXPECT_EQ(brute_tiling(a, b, 9), 10u);
  EXPECT_DOUBLE_EQ(semantic_similarity(stream_of(a), stream_of(b), 9), 0.4);
  // A shorter shared run falls under the floor.
  a.erase(a.begin() + 5);
  a.erase(a.begin() + 5);
  EXPECT_DOUBLE_EQ(semantic_similarity(stream_of(a), stream_of(b), 9), 0.0);
}

TEST(Semantic, MatchesBruteForceTilingOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t alphabet = 2 + rng.uniform_index(4);
    const std::size_t min_len = 1 + rng.uniform_index(5);
    const auto a = random_stream(rng, 64, alphabet);
    const auto b = random_stream(rng, 64, alphabet);
    ASSERT_EQ(tiled_tokens(a, b, min_len), brute_tiling(a, b, min_len))
        << "trial " << trial << " min " << min_len;
  }
}

TEST(Semantic, SymmetricAndInRange) {
  Rng rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = random_stream(rng, 64, 3);
    auto b = random_stream(rng, 64, 3);
    if (a.empty() && b.empty()) continue;
    const std::size_t min_len = 1 + rng.uniform_index(9);
    const double s = semantic_similarity(stream_of(a), stream_of(b), min_len);
    EXPECT_DOUBLE_EQ(s, semantic_similarity(stream_of(b), stream_of(a), min_len));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Semantic, EmptyStreams) {
  const TokenStream empty;
  try {
    semantic_similarity(empty, empty, 9);
    FAIL() << "expected EmptyStream";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyStream);
  }
  EXPECT_DOUBLE_EQ(semantic_similarity(empty, stream_of({"x"}), 1), 0.0);
}

TEST(Combined, Examples) {
  const PesoConfig config = even_weights();
  EXPECT_NEAR(combined_score(0.80, 0.73, config), 0.765, 1e-12);
  EXPECT_NEAR(combined_score(0.55, 0.00, config), 0.275, 1e-12);
  PesoConfig skewed;
  skewed.mu = 0.3;
  skewed.nu = 0.7;
  for (double x : {0.0, 0.25, 0.6, 1.0}) {
    EXPECT_NEAR(combined_score(x, x, skewed), x, 1e-12);
    EXPECT_NEAR(combined_score(x, x, config), x, 1e-12);
  }
}

TEST(Combined, MonotoneInEachScore) {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    PesoConfig config;
    config.mu = rng.uniform_real();
    config.nu = 1.0 - config.mu;
    const double s1 = rng.uniform_real();
    const double s2 = rng.uniform_real();
    const double step = rng.uniform_real() * (1.0 - std::max(s1, s2));
    const double base = combined_score(s1, s2, config);
    EXPECT_GE(combined_score(s1 + step, s2, config), base);
    EXPECT_GE(combined_score(s1, s2 + step, config), base);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0);
  }
}

TEST(Tokenize, IdentifiersCollapse) {
  EXPECT_EQ(tokenize("x = 1", Language::kPython).tokens,
            tokenize("y = 1", Language::kPython).tokens);
}

TEST(Tokenize, CommentsAreDropped) {
  const TokenStream s = tokenize("// c\nreturn a", Language::kGo);
  EXPECT_EQ(s.tokens, (std::vector<std::string>{"return", "ID"}));
}

TEST(Tokenize, SpansCoverEachToken) {
  const std::string text = "a+b";
  const TokenStream s = tokenize(text, Language::kPython);
  ASSERT_EQ(s.size(), 3u);
  ASSERT_EQ(s.spans.size(), 3u);
  const std::vector<std::string> expected = {"a", "+", "b"};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto [begin, end] = s.spans[i];
    EXPECT_EQ(text.substr(begin, end - begin), expected[i]);
    if (i > 0) EXPECT_LE(s.spans[i - 1].second, begin);
  }
}

TEST(Tokenize, UnlexableInputReportsOffset) {
  try {
    tokenize("x = \"open", Language::kPython);
    FAIL() << "expected LexError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLexError);
    EXPECT_TRUE(e.offset().has_value());
  }
}

TEST(ScorePair, SelfIsOne) {
  const CodeSample s = load_sample(fixture_dir() / "programs" / "gcd.c");
  const SimilarityScore score = score_pair(s, s, even_weights());
  EXPECT_DOUBLE_EQ(score.s1, 1.0);
  EXPECT_DOUBLE_EQ(score.s2, 1.0);
  EXPECT_DOUBLE_EQ(score.ss, 1.0);
}

TEST(ScorePair, RenameIsSemanticallyInvisible) {
  const CodeSample a = make_original("a", Language::kPython,
                                     "def total(values):\n    acc = 0\n    for v in values:\n"
                                     "        acc += v\n    return acc\n");
  const CodeSample b = make_original("b", Language::kPython,
                                     "def f0(xs):\n    s = 0\n    for q in xs:\n"
                                     "        s += q\n    return s\n");
  const SimilarityScore score = score_pair(a, b, even_weights());
  EXPECT_DOUBLE_EQ(score.s2, 1.0);
  EXPECT_LT(score.s1, 1.0);
  EXPECT_NEAR(score.ss, 0.5 * score.s1 + 0.5 * score.s2, 1e-12);
}

TEST(ScorePair, RandomConsistentRenamesKeepSemanticScore) {
  const CodeSample base = load_sample(fixture_dir() / "programs" / "stats.py");
  const TokenStream original = tokenize(base);
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::string text = base.text;
    const std::string from = trial % 2 ? "values" : "total";
    const std::string to = "n" + std::to_string(rng.uniform_index(100000));
    std::string out;
    for (std::size_t i = 0; i < text.size();) {
      const bool boundary_before =
          i == 0 || !(std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_');
      const std::size_t end = i + from.size();
      const bool boundary_after =
          end >= text.size() ||
          !(std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_');
      if (boundary_before && text.compare(i, from.size(), from) == 0 && boundary_after) {
        out += to;
        i = end;
      } else {
        out += text[i++];
      }
    }
    EXPECT_DOUBLE_EQ(semantic_similarity(original, tokenize(out, Language::kPython), 9), 1.0);
  }
}

TEST(ScorePair, GoldenFixturePair) {
  const CodeSample a = load_sample(fixture_dir() / "programs" / "gcd.c");
  const CodeSample b = load_sample(fixture_dir() / "programs" / "sort.c");
  const SimilarityScore score = score_pair(a, b, even_weights());
  const double s1 = dp_surface(a.text, b.text);
  const TokenStream ta = tokenize(a);
  const TokenStream tb = tokenize(b);
  const double s2 = 2.0 * static_cast<double>(brute_tiling(ta.tokens, tb.tokens, 9)) /
                    static_cast<double>(ta.size() + tb.size());
  EXPECT_DOUBLE_EQ(score.s1, s1);
  EXPECT_DOUBLE_EQ(score.s2, s2);
  EXPECT_NEAR(score.s1, 0.4173591874, 1e-9);
  EXPECT_NEAR(score.s2, 0.1363636364, 1e-9);
  EXPECT_NEAR(score.ss, 0.2768614119, 1e-9);
}

TEST(ScorePair, LanguageMismatch) {
  const CodeSample a = make_original("a", Language::kPython, "x = 1\n");
  const CodeSample b = make_original("b", Language::kGo, "package main\n");
  try {
    score_pair(a, b, even_weights());
    FAIL() << "expected LanguageMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLanguageMismatch);
  }
}

}  // namespace
}  // namespace pk

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "perturbkit/similarity/similarity.h"

namespace pk {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      out.push_back(U'�');
      ++i;
      continue;
    }
    if (i + extra >= text.size()) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

namespace {

struct Block {
  std::uint64_t pv = ~0ULL;
  std::uint64_t mv = 0;
};

// One column step of the blocked bit-vector recurrence. `hin` is the
// horizontal delta entering the block from above; returns the delta leaving
// it at row `high`.
int advance_block(Block& block, std::uint64_t eq, int hin,
                  std::uint64_t high) {
  const std::uint64_t pv = block.pv;
  const std::uint64_t mv = block.mv;
  const std::uint64_t xv = eq | mv;
  if (hin < 0) eq |= 1;
  const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
  std::uint64_t ph = mv | ~(xh | pv);
  std::uint64_t mh = pv & xh;
  int hout = 0;
  if (ph & high) hout = 1;
  if (mh & high) hout = -1;
  ph <<= 1;
  mh <<= 1;
  if (hin < 0) {
    mh |= 1;
  } else if (hin > 0) {
    ph |= 1;
  }
  block.pv = mh | ~(xv | ph);
  block.mv = ph & xv;
  return hout;
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return b.size();
  const std::size_t m = a.size();
  const std::size_t blocks = (m + 63) / 64;

  std::unordered_map<char32_t, std::vector<std::uint64_t>> peq;
  for (std::size_t i = 0; i < m; ++i) {
    auto& masks = peq[a[i]];
    if (masks.empty()) masks.assign(blocks, 0);
    masks[i / 64] |= 1ULL << (i % 64);
  }

  std::vector<Block> state(blocks);
  const std::uint64_t last_high = 1ULL << ((m - 1) % 64);
  std::size_t score = m;
  for (char32_t c : b) {
    const auto it = peq.find(c);
    const std::uint64_t* eq = it == peq.end() ? nullptr : it->second.data();
    int carry = 1;
    for (std::size_t k = 0; k < blocks; ++k) {
      const std::uint64_t high = k + 1 == blocks ? last_high : 1ULL << 63;
      carry = advance_block(state[k], eq ? eq[k] : 0, carry, high);
    }
    score = static_cast<std::size_t>(static_cast<long long>(score) + carry);
  }
  return score;
}

double surface_similarity(std::string_view a, std::string_view b) {
  const std::u32string ca = decode_utf8(a);
  const std::u32string cb = decode_utf8(b);
  const std::size_t longest = std::max(ca.size(), cb.size());
  if (longest == 0) return 1.0;
  const double d = static_cast<double>(levenshtein(ca, cb));
  return 1.0 - d / static_cast<double>(longest);
}

}  // namespace pk

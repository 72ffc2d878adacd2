#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace pk {

std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// Seeded generator with platform-independent draws. std::mt19937_64 output
// is fully specified by the standard; the standard distributions are not,
// so draws are derived here directly from raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);
  // Uniform in [0, 1).
  double uniform_real();
  bool coin() { return (next() >> 63) != 0; }

  // Independent stream for a named sub-task.
  Rng fork(std::string_view salt) { return Rng(next() ^ fnv1a64(salt)); }

 private:
  std::mt19937_64 engine_;
};

// seed XOR hash(sample id), used to give each sample its own stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

}  // namespace pk

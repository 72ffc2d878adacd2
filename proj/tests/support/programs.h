#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perturbkit/peso/optimizer.h"

namespace pk::testing {

// Random straight-line programs of a few functions with branches, loops and
// arithmetic. Language is Python or C.
CodeSample random_program(std::uint64_t seed, Language language,
                          const std::string& id);

struct RandomPair {
  CodeSample original;
  CodeSample perturbed;
  std::vector<IterationRecord> trace;  // accepted steps only
};

// Applies a chain of 1 to 4 seed-chosen rule perturbations.
RandomPair random_pair(std::uint64_t seed);

}  // namespace pk::testing

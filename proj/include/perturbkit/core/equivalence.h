#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace pk {

// One program input: stdin text plus command-line arguments.
struct ProgramInput {
  std::string stdin_data;
  std::vector<std::string> args;
};

// Inputs over which two programs must agree. When extra parameters are
// allowed, the candidate is invoked with `extra_param_defaults` appended to
// its arguments; those values must leave its output unchanged.
struct EquivalenceSpec {
  std::vector<ProgramInput> input_suite;
  bool extra_params_allowed = false;
  std::vector<std::string> extra_param_defaults;
};

// Accepts either a list of {"stdin", "args"} objects or an object with
// "inputs", "extra_params_allowed" and "extra_param_defaults".
// Throws Error(kConfigError).
EquivalenceSpec input_suite_from_json(const nlohmann::json& j);
EquivalenceSpec load_input_suite(const std::filesystem::path& path);
nlohmann::json to_json(const EquivalenceSpec& spec);

}  // namespace pk

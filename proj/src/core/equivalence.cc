#include "perturbkit/core/equivalence.h"

#include <fstream>

#include "perturbkit/core/error.h"

namespace pk {

using nlohmann::json;

namespace {

ProgramInput input_from_json(const json& j) {
  ProgramInput in;
  if (j.is_string()) {
    in.stdin_data = j.get<std::string>();
    return in;
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfigError, "input must be an object or string");
  }
  if (j.contains("stdin")) in.stdin_data = j.at("stdin").get<std::string>();
  if (j.contains("args")) in.args = j.at("args").get<std::vector<std::string>>();
  return in;
}

}  // namespace

EquivalenceSpec input_suite_from_json(const json& j) {
  EquivalenceSpec spec;
  try {
    const json* inputs = &j;
    if (j.is_object()) {
      inputs = &j.at("inputs");
      spec.extra_params_allowed = j.value("extra_params_allowed", false);
      if (j.contains("extra_param_defaults")) {
        spec.extra_param_defaults =
            j.at("extra_param_defaults").get<std::vector<std::string>>();
      }
    }
    if (!inputs->is_array()) {
      throw Error(ErrorCode::kConfigError, "input suite must be a list");
    }
    for (const json& item : *inputs) spec.input_suite.push_back(input_from_json(item));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("input suite: ") + e.what());
  }
  return spec;
}

EquivalenceSpec load_input_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read " + path.string());
  try {
    return input_suite_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
}

json to_json(const EquivalenceSpec& spec) {
  json inputs = json::array();
  for (const ProgramInput& in : spec.input_suite) {
    inputs.push_back({{"stdin", in.stdin_data}, {"args", in.args}});
  }
  return {{"inputs", inputs},
          {"extra_params_allowed", spec.extra_params_allowed},
          {"extra_param_defaults", spec.extra_param_defaults}};
}

}  // namespace pk

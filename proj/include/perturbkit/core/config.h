#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/core/catalog.h"

namespace pk {

struct PesoConfig {
  double mu = 0.5;
  double nu = 0.5;
  double temperature = 2.0;
  int max_iter = 15;
  double ss_threshold = 0.2;
  int min_tile_len = 9;
  std::uint64_t rng_seed = 0;

  // Throws Error(kConfigError) when a field is out of range or
  // |mu + nu - 1| > 1e-9.
  void validate() const;
};

struct LlmSettings {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string model = "gpt-4o";
  std::string token_env = "PERTURBKIT_API_KEY";
  double timeout_s = 120.0;
  int max_in_flight = 4;
  int retries = 2;
  double temperature = 0.8;
  // When set, requests are answered from canned files instead of HTTP.
  std::string replay_dir;

  bool configured() const { return !base_url.empty() || !replay_dir.empty(); }
};

// Build step (optional) and run step for executing a program. Arguments
// may contain {file} (source path) and {dir} (scratch directory).
struct RunnerTemplate {
  std::vector<std::string> build;
  std::vector<std::string> run;
};

struct VoterSettings {
  std::string id;
  std::string model;
};

struct VerifySettings {
  // Keyed by toolchain name: python, c, cpp, go, rust, java.
  std::map<std::string, std::vector<std::string>> toolchains;
  std::map<std::string, RunnerTemplate> runners;
  std::vector<VoterSettings> voters;
  double compile_timeout_s = 30.0;
  double exec_timeout_s = 10.0;
  // Equivalence stage falls back to an always-true stub when neither an
  // execution oracle nor voters are available.
  bool stub_fallback = true;
};

struct Settings {
  PesoConfig peso;
  EngineKind engine = EngineKind::kRuleBased;
  LlmSettings llm;
  VerifySettings verify;

  void validate() const;
};

// Toolchain key for a language ("c"/"cpp" for the C family).
std::string toolchain_key(Language language, CDialect dialect);

// Locally runnable defaults: python3, gcc/g++ and rustc where present.
VerifySettings default_verify_settings();

Settings settings_from_json(const nlohmann::json& j);
Settings load_settings(const std::filesystem::path& path);
// Snapshot for manifests. Contains no secrets by construction.
nlohmann::json to_json(const Settings& settings);
nlohmann::json to_json(const PesoConfig& config);

}  // namespace pk

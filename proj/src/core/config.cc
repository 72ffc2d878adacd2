#include "perturbkit/core/config.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "perturbkit/core/error.h"

namespace pk {

using nlohmann::json;

void PesoConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kConfigError, what);
  };
  if (!(mu >= 0.0 && mu <= 1.0)) fail("mu must lie in [0,1]");
  if (!(nu >= 0.0 && nu <= 1.0)) fail("nu must lie in [0,1]");
  if (std::abs(mu + nu - 1.0) > 1e-9) {
    fail("mu + nu must equal 1 (got " + std::to_string(mu + nu) + ")");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail("temperature must be positive");
  }
  if (max_iter <= 0) fail("max_iter must be positive");
  if (!(ss_threshold >= 0.0 && ss_threshold <= 1.0)) {
    fail("ss_threshold must lie in [0,1]");
  }
  if (min_tile_len <= 0) fail("min_tile_len must be positive");
}

void Settings::validate() const {
  peso.validate();
  if (llm.max_in_flight <= 0) {
    throw Error(ErrorCode::kConfigError, "llm.max_in_flight must be positive");
  }
  if (llm.retries < 0) {
    throw Error(ErrorCode::kConfigError, "llm.retries must be >= 0");
  }
  if (verify.compile_timeout_s <= 0 || verify.exec_timeout_s <= 0) {
    throw Error(ErrorCode::kConfigError, "timeouts must be positive");
  }
}

std::string toolchain_key(Language language, CDialect dialect) {
  switch (language) {
    case Language::kCCpp: return dialect == CDialect::kC ? "c" : "cpp";
    case Language::kGo: return "go";
    case Language::kPython: return "python";
    case Language::kRust: return "rust";
    case Language::kJava: return "java";
  }
  return "unknown";
}

namespace {

bool on_path(const std::string& program) {
  const char* path = std::getenv("PATH");
  if (path == nullptr) return false;
  std::stringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    std::error_code ec;
    const auto candidate = std::filesystem::path(dir) / program;
    if (std::filesystem::is_regular_file(candidate, ec)) return true;
  }
  return false;
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

void reject_secrets(const json& j, const std::string& where) {
  static constexpr const char* kSecretKeys[] = {"api_key", "token", "apikey",
                                                "secret", "password"};
  for (const char* key : kSecretKeys) {
    if (j.contains(key)) {
      throw Error(ErrorCode::kConfigError,
                  where + "." + key +
                      ": secrets must come from environment variables, not "
                      "config files");
    }
  }
}

}  // namespace

VerifySettings default_verify_settings() {
  VerifySettings v;
  if (on_path("python3")) {
    v.toolchains["python"] = {"python3", "-S", "-m", "py_compile", "{file}"};
    v.runners["python"] = {{}, {"python3", "-S", "{file}"}};
  }
  if (on_path("gcc")) {
    v.toolchains["c"] = {"gcc", "-std=c11", "-fsyntax-only", "{file}"};
    v.runners["c"] = {{"gcc", "-std=c11", "-O0", "-o", "{dir}/prog", "{file}",
                       "-lm"},
                      {"{dir}/prog"}};
  }
  if (on_path("g++")) {
    v.toolchains["cpp"] = {"g++", "-std=c++20", "-fsyntax-only", "{file}"};
    v.runners["cpp"] = {{"g++", "-std=c++20", "-O0", "-o", "{dir}/prog",
                         "{file}"},
                        {"{dir}/prog"}};
  }
  if (on_path("rustc")) {
    v.toolchains["rust"] = {"rustc",     "--edition", "2021",
                            "--crate-type", "bin",   "--emit=metadata",
                            "-o",        "{dir}/check.rmeta", "{file}"};
    v.runners["rust"] = {{"rustc", "--edition", "2021", "-o", "{dir}/prog",
                          "{file}"},
                         {"{dir}/prog"}};
  }
  if (on_path("go")) {
    v.toolchains["go"] = {"go", "build", "-o", "{dir}/prog", "{file}"};
    v.runners["go"] = {{"go", "build", "-o", "{dir}/prog", "{file}"},
                       {"{dir}/prog"}};
  }
  if (on_path("javac")) {
    v.toolchains["java"] = {"javac", "-d", "{dir}/classes", "{file}"};
  }
  return v;
}

Settings settings_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfigError, "config root must be an object");
  }
  Settings s;
  s.verify = default_verify_settings();
  try {
    reject_secrets(j, "config");
    read_if(j, "mu", s.peso.mu);
    read_if(j, "nu", s.peso.nu);
    read_if(j, "temperature", s.peso.temperature);
    read_if(j, "max_iter", s.peso.max_iter);
    read_if(j, "ss_threshold", s.peso.ss_threshold);
    read_if(j, "min_tile_len", s.peso.min_tile_len);
    read_if(j, "rng_seed", s.peso.rng_seed);
    if (j.contains("engine")) {
      s.engine = parse_engine_kind(j.at("engine").get<std::string>());
    }
    if (j.contains("llm")) {
      const json& l = j.at("llm");
      reject_secrets(l, "llm");
      read_if(l, "base_url", s.llm.base_url);
      read_if(l, "model", s.llm.model);
      read_if(l, "token_env", s.llm.token_env);
      read_if(l, "timeout_s", s.llm.timeout_s);
      read_if(l, "max_in_flight", s.llm.max_in_flight);
      read_if(l, "retries", s.llm.retries);
      read_if(l, "temperature", s.llm.temperature);
      read_if(l, "replay_dir", s.llm.replay_dir);
    }
    if (j.contains("toolchains")) {
      for (const auto& [key, argv] : j.at("toolchains").items()) {
        if (argv.is_null()) {
          s.verify.toolchains.erase(key);
        } else {
          s.verify.toolchains[key] = argv.get<std::vector<std::string>>();
        }
      }
    }
    if (j.contains("runners")) {
      for (const auto& [key, r] : j.at("runners").items()) {
        if (r.is_null()) {
          s.verify.runners.erase(key);
          continue;
        }
        RunnerTemplate t;
        read_if(r, "build", t.build);
        read_if(r, "run", t.run);
        s.verify.runners[key] = std::move(t);
      }
    }
    if (j.contains("voters")) {
      for (const json& v : j.at("voters")) {
        reject_secrets(v, "voters[]");
        VoterSettings vs;
        read_if(v, "id", vs.id);
        read_if(v, "model", vs.model);
        if (vs.id.empty()) vs.id = vs.model;
        s.verify.voters.push_back(std::move(vs));
      }
    }
    read_if(j, "compile_timeout_s", s.verify.compile_timeout_s);
    read_if(j, "exec_timeout_s", s.verify.exec_timeout_s);
    read_if(j, "stub_fallback", s.verify.stub_fallback);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("bad config: ") +
                                             e.what());
  }
  s.validate();
  return s;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfigError,
                "cannot open config file " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                "cannot parse " + path.string() + ": " + e.what());
  }
  return settings_from_json(j);
}

json to_json(const PesoConfig& c) {
  return json{{"mu", c.mu},
              {"nu", c.nu},
              {"temperature", c.temperature},
              {"max_iter", c.max_iter},
              {"ss_threshold", c.ss_threshold},
              {"min_tile_len", c.min_tile_len},
              {"rng_seed", c.rng_seed}};
}

json to_json(const Settings& s) {
  json j = to_json(s.peso);
  j["engine"] = std::string(to_string(s.engine));
  j["llm"] = {{"base_url", s.llm.base_url},
              {"model", s.llm.model},
              {"token_env", s.llm.token_env},
              {"timeout_s", s.llm.timeout_s},
              {"max_in_flight", s.llm.max_in_flight},
              {"retries", s.llm.retries},
              {"temperature", s.llm.temperature},
              {"replay_dir", s.llm.replay_dir}};
  j["toolchains"] = s.verify.toolchains;
  json runners = json::object();
  for (const auto& [k, r] : s.verify.runners) {
    runners[k] = {{"build", r.build}, {"run", r.run}};
  }
  j["runners"] = runners;
  json voters = json::array();
  for (const auto& v : s.verify.voters) {
    voters.push_back({{"id", v.id}, {"model", v.model}});
  }
  j["voters"] = voters;
  j["compile_timeout_s"] = s.verify.compile_timeout_s;
  j["exec_timeout_s"] = s.verify.exec_timeout_s;
  j["stub_fallback"] = s.verify.stub_fallback;
  return j;
}

}  // namespace pk

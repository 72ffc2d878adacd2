#include "perturbkit/transform/transport.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "perturbkit/core/error.h"
#include "perturbkit/core/rng.h"

namespace pk {

using nlohmann::json;

namespace {

json request_json(const ChatRequest& r) {
  json messages = json::array();
  for (const ChatMessage& m : r.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  return {{"model", r.model}, {"messages", messages}, {"temperature", r.temperature}};
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string request_key(const ChatRequest& request) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(request_json(request).dump())));
  return buf;
}

HttpTransport::HttpTransport(LlmSettings settings)
    : settings_(std::move(settings)),
      in_flight_(std::clamp(settings_.max_in_flight, 1, 64)) {
  const char* token = std::getenv(settings_.token_env.c_str());
  if (!token || !*token) {
    throw Error(ErrorCode::kConfigError,
                "environment variable " + settings_.token_env + " holds no API token");
  }
  token_ = token;
  if (settings_.base_url.empty()) {
    throw Error(ErrorCode::kConfigError, "llm.base_url is empty");
  }
}

std::string HttpTransport::complete(const ChatRequest& request) {
  // Split "https://host[:port]/prefix" into origin and path prefix.
  const std::string& url = settings_.base_url;
  const std::size_t scheme = url.find("://");
  const std::size_t slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  const std::string origin = slash == std::string::npos ? url : url.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<64>& s;
    ~Release() { s.release(); }
  } release{in_flight_};

  httplib::Client client(origin);
  const auto secs = static_cast<time_t>(settings_.timeout_s);
  client.set_connection_timeout(secs);
  client.set_read_timeout(secs);
  client.set_write_timeout(secs);
  client.set_bearer_token_auth(token_);
  const auto res = client.Post(prefix + "/chat/completions", request_json(request).dump(),
                               "application/json");
  if (!res) {
    throw Error(ErrorCode::kEngineFailure,
                "HTTP request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kEngineFailure,
                "HTTP status " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
  }
  const json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded()) throw Error(ErrorCode::kEngineFailure, "reply is not JSON");
  try {
    return body.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kEngineFailure, std::string("unexpected reply shape: ") + e.what());
  }
}

ReplayTransport::ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::kConfigError, "replay directory not found: " + dir_.string());
  }
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") queue_.push_back(e.path());
  }
  std::sort(queue_.begin(), queue_.end());
}

std::string ReplayTransport::complete(const ChatRequest& request) {
  const std::lock_guard lock(mutex_);
  ++calls_;
  const auto keyed = dir_ / (request_key(request) + ".txt");
  if (std::filesystem::exists(keyed)) return read_text(keyed);
  if (next_ >= queue_.size()) {
    throw Error(ErrorCode::kEngineFailure, "replay responses exhausted in " + dir_.string());
  }
  return read_text(queue_[next_++]);
}

std::size_t ReplayTransport::calls() const {
  const std::lock_guard lock(mutex_);
  return calls_;
}

std::shared_ptr<LlmTransport> make_transport(const LlmSettings& settings) {
  if (!settings.replay_dir.empty()) return std::make_shared<ReplayTransport>(settings.replay_dir);
  return std::make_shared<HttpTransport>(settings);
}

}  // namespace pk

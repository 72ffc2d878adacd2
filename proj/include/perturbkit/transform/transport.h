#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <utility>
#include <vector>

#include "perturbkit/core/config.h"

namespace pk {

struct ChatMessage {
  std::string role;  // system, user
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
};

// Stable hex key of a request, used to name replay files.
std::string request_key(const ChatRequest& request);

class LlmTransport {
 public:
  virtual ~LlmTransport() = default;
  // Returns the assistant reply text. Throws Error(kEngineFailure).
  virtual std::string complete(const ChatRequest& request) = 0;
};

// chat-completions over HTTPS. The bearer token is read from the
// environment variable named in settings.token_env.
class HttpTransport final : public LlmTransport {
 public:
  explicit HttpTransport(LlmSettings settings);
  std::string complete(const ChatRequest& request) override;

 private:
  LlmSettings settings_;
  std::string token_;
  std::counting_semaphore<64> in_flight_;
};

// Answers from files in a directory: `<request_key>.txt` when present,
// otherwise the sorted `*.txt` files in turn.
class ReplayTransport final : public LlmTransport {
 public:
  explicit ReplayTransport(std::filesystem::path dir);
  std::string complete(const ChatRequest& request) override;
  std::size_t calls() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> queue_;
  mutable std::mutex mutex_;
  std::size_t next_ = 0;
  std::size_t calls_ = 0;
};

std::shared_ptr<LlmTransport> make_transport(const LlmSettings& settings);

}  // namespace pk

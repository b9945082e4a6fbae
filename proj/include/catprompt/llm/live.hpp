#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <string>

#include "catprompt/llm/backend.hpp"

namespace catprompt::llm {

inline constexpr const char* kEndpointEnv = "LLM_ENDPOINT";
inline constexpr const char* kApiKeyEnv = "LLM_API_KEY";

struct LiveConfig {
  /// Full URL of an OpenAI-compatible chat/completions endpoint.
  std::string endpoint;
  std::string api_key;
  std::size_t max_in_flight = 4;
  /// 0 disables the token-per-minute throttle.
  std::size_t tokens_per_minute = 0;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  /// nullopt leaves temperature to the provider's default.
  std::optional<double> temperature = 0.0;
  std::chrono::seconds timeout{120};
};

/// Reads the endpoint and key from the environment. Throws Error(Errc::config)
/// naming whichever variable is missing.
LiveConfig live_config_from_env();

/// Client for an OpenAI-compatible chat/completions endpoint. Retries
/// transport failures, 429 and 5xx with exponential backoff; other statuses
/// fail immediately.
class LiveBackend final : public Backend {
 public:
  LiveBackend(LiveConfig live, BackendConfig config);

  std::string kind() const override { return "live"; }
  const LiveConfig& live_config() const noexcept { return live_; }

 protected:
  std::string do_complete(const CompletionRequest& request) override;

 private:
  std::string post_once(const std::string& body, int& status, bool& retryable);
  void acquire_slot();
  void release_slot();
  void throttle(std::size_t tokens);

  LiveConfig live_;
  std::string scheme_host_port_;
  std::string path_;

  std::mutex mutex_;
  std::condition_variable slot_free_;
  std::size_t in_flight_ = 0;
  std::deque<std::pair<std::chrono::steady_clock::time_point, std::size_t>> spent_;
};

}  // namespace catprompt::llm

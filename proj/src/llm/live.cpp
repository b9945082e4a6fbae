#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "catprompt/llm/live.hpp"

#include <cstdlib>
#include <thread>

#include "catprompt/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace catprompt::llm {

LiveConfig live_config_from_env() {
  LiveConfig c;
  const char* endpoint = std::getenv(kEndpointEnv);
  const char* key = std::getenv(kApiKeyEnv);
  if (endpoint == nullptr || *endpoint == '\0') {
    throw Error(Errc::config, std::string("live backend needs ") + kEndpointEnv + " to be set");
  }
  if (key == nullptr || *key == '\0') {
    throw Error(Errc::config, std::string("live backend needs ") + kApiKeyEnv + " to be set");
  }
  c.endpoint = endpoint;
  c.api_key = key;
  return c;
}

LiveBackend::LiveBackend(LiveConfig live, BackendConfig config)
    : Backend(std::move(config)), live_(std::move(live)) {
  auto scheme_end = live_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::config, "endpoint '" + live_.endpoint + "' has no scheme");
  }
  auto path_start = live_.endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = live_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : live_.endpoint.substr(path_start);
  if (live_.max_in_flight == 0) live_.max_in_flight = 1;
  if (live_.max_attempts < 1) live_.max_attempts = 1;
}

void LiveBackend::acquire_slot() {
  std::unique_lock lock(mutex_);
  slot_free_.wait(lock, [&] { return in_flight_ < live_.max_in_flight; });
  ++in_flight_;
}

void LiveBackend::release_slot() {
  {
    std::lock_guard lock(mutex_);
    --in_flight_;
  }
  slot_free_.notify_one();
}

void LiveBackend::throttle(std::size_t tokens) {
  if (live_.tokens_per_minute == 0) return;
  using clock = std::chrono::steady_clock;
  const auto window = std::chrono::minutes(1);
  std::unique_lock lock(mutex_);
  for (;;) {
    auto now = clock::now();
    while (!spent_.empty() && now - spent_.front().first >= window) spent_.pop_front();
    std::size_t used = 0;
    for (const auto& [_, n] : spent_) used += n;
    // A single oversized request still goes through once the window is empty.
    if (spent_.empty() || used + tokens <= live_.tokens_per_minute) {
      spent_.emplace_back(now, tokens);
      return;
    }
    auto wake = spent_.front().first + window;
    lock.unlock();
    std::this_thread::sleep_until(wake);
    lock.lock();
  }
}

std::string LiveBackend::post_once(const std::string& body, int& status, bool& retryable) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(live_.timeout);
  httplib::Headers headers{{"Authorization", "Bearer " + live_.api_key}};
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    status = 0;
    retryable = true;
    return "transport error: " + httplib::to_string(res.error());
  }
  status = res->status;
  retryable = status == 429 || status >= 500;
  return res->body;
}

std::string LiveBackend::do_complete(const CompletionRequest& request) {
  nlohmann::json body{{"model", config().model},
                      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
                      {"max_tokens", request.max_output_tokens},
                      {"seed", request.seed}};
  if (live_.temperature) body["temperature"] = *live_.temperature;
  const std::string payload = body.dump();

  throttle(config().tokenizer.count(request.prompt) + request.max_output_tokens);
  acquire_slot();
  struct Release {
    LiveBackend* self;
    ~Release() { self->release_slot(); }
  } release{this};

  std::string last_error;
  auto backoff = live_.initial_backoff;
  for (int attempt = 1; attempt <= live_.max_attempts; ++attempt) {
    int status = 0;
    bool retryable = false;
    std::string response = post_once(payload, status, retryable);
    if (status >= 200 && status < 300) {
      try {
        auto j = nlohmann::json::parse(response);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::transport, std::string("malformed completion response: ") + e.what());
      }
    }
    last_error = status == 0 ? response : "HTTP " + std::to_string(status) + ": " + response;
    if (!retryable) break;
    if (attempt < live_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw Error(Errc::transport, "completion failed: " + last_error);
}

}  // namespace catprompt::llm

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "catprompt/llm/tokenizer.hpp"

namespace catprompt::llm {

/// Maximum total tokens (prompt plus output) a single call may use.
struct TokenBudget {
  std::size_t k = 4096;
};

struct CompletionRequest {
  std::string prompt;
  std::size_t max_output_tokens = 256;
  std::int64_t seed = 0;
};

/// Outcome of a budget check. Rejection is a value, not an error.
struct BudgetDecision {
  bool accepted = false;
  std::size_t prompt_tokens = 0;
  std::size_t max_output_tokens = 0;
  std::size_t k = 0;

  explicit operator bool() const noexcept { return accepted; }
};

BudgetDecision enforce_budget(const CompletionRequest& request, const TokenBudget& budget,
                              const Tokenizer& tokenizer);

struct BackendConfig {
  TokenBudget budget;
  Tokenizer tokenizer;
  std::string model = "mock";
};

/// A completion backend. `complete` rejects empty prompts and over-budget
/// requests before the implementation sees them. Implementations must be
/// safe to call from several threads at once.
class Backend {
 public:
  explicit Backend(BackendConfig config) : config_(std::move(config)) {}
  virtual ~Backend() = default;

  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;

  /// Throws Error(Errc::empty_prompt) or Error(Errc::budget_exceeded); other
  /// errors come from the implementation.
  std::string complete(const CompletionRequest& request);

  const BackendConfig& config() const noexcept { return config_; }
  virtual std::string kind() const = 0;

 protected:
  virtual std::string do_complete(const CompletionRequest& request) = 0;

 private:
  BackendConfig config_;
};

using BackendPtr = std::shared_ptr<Backend>;

}  // namespace catprompt::llm

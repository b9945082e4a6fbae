#include "catprompt/llm/backend.hpp"

#include "catprompt/error.hpp"
#include "catprompt/text/template.hpp"

namespace catprompt::llm {

BudgetDecision enforce_budget(const CompletionRequest& request, const TokenBudget& budget,
                              const Tokenizer& tokenizer) {
  BudgetDecision d;
  d.prompt_tokens = tokenizer.count(request.prompt);
  d.max_output_tokens = request.max_output_tokens;
  d.k = budget.k;
  d.accepted = budget.k > 0 && d.prompt_tokens + d.max_output_tokens <= budget.k;
  return d;
}

std::string Backend::complete(const CompletionRequest& request) {
  if (text::normalize_whitespace(request.prompt).empty()) {
    throw Error(Errc::empty_prompt, "refusing to send an empty prompt");
  }
  if (request.max_output_tokens == 0) {
    throw Error(Errc::budget_exceeded, "max output tokens must be positive");
  }
  BudgetDecision d = enforce_budget(request, config_.budget, config_.tokenizer);
  if (!d) {
    throw Error(Errc::budget_exceeded,
                "request needs " + std::to_string(d.prompt_tokens) + " prompt + " +
                    std::to_string(d.max_output_tokens) + " output tokens but k = " +
                    std::to_string(d.k));
  }
  return do_complete(request);
}

}  // namespace catprompt::llm

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "catprompt/llm/backend.hpp"
#include "catprompt/text/template.hpp"

namespace catprompt::prompt {

/// Decides which strings belong to an object. Full string sets are not
/// enumerable, so membership is an explicit list: either the allowed strings
/// or the excluded ones (e.g. a refusal boilerplate).
struct Membership {
  enum class Kind { any, allow_list, exclude_list };

  Kind kind = Kind::any;
  std::vector<std::string> members;
  std::string description;

  bool contains(const std::string& s) const;
};

/// An object of the prompt category: a set of strings within the token
/// budget, represented by its membership rule and a finite witness list.
struct StrObject {
  std::string label;
  Membership membership;
  std::vector<std::string> witnesses;
};

/// Deduplicates witnesses (first occurrence wins) and adds them to an
/// allow-list membership.
StrObject make_object(std::string label, std::vector<std::string> witnesses,
                      Membership membership = {});

/// A prompt as a morphism: a template with exactly one slot, used once.
/// Identity of an arrow is its description; two arrows that behave the same
/// on every witness are still different arrows.
struct PromptArrow {
  std::string label;
  text::Template description;
  std::string dom;
  std::string cod;
  std::string slot;

  std::string render(const std::string& input) const;
};

/// Throws Error(Errc::construction) unless the template has one slot used once.
PromptArrow make_arrow(std::string label, std::string_view description, std::string dom,
                       std::string cod);

/// The identity prompt on any object.
inline constexpr std::string_view kIdentityTemplate = "Return {X}";

/// String tensor: concatenation joined by one newline when both sides are
/// non-empty, and plain concatenation otherwise, so the empty string is a
/// strict unit.
std::string tensor_strings(std::string_view x, std::string_view y);

/// Same, but throws Error(Errc::budget_exceeded) if the result has more than
/// k tokens.
std::string tensor_strings(std::string_view x, std::string_view y, const llm::TokenBudget& budget,
                           const llm::Tokenizer& tokenizer);

/// p (x) q acting slot-wise: (p (x) q)(x, y) = p(x) (x) q(y).
struct TensorArrow {
  std::string label;
  PromptArrow left;
  PromptArrow right;
  /// Display form: both descriptions tensored, slots renamed L and R.
  text::Template description;
};

TensorArrow tensor_arrows(const PromptArrow& p, const PromptArrow& q);
TensorArrow tensor_arrows(const PromptArrow& p, const PromptArrow& q,
                          const llm::TokenBudget& budget, const llm::Tokenizer& tokenizer);

}  // namespace catprompt::prompt

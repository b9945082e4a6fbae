#include "catprompt/error.hpp"

namespace catprompt {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::composition_mismatch: return "composition-mismatch";
    case Errc::not_found: return "not-found";
    case Errc::duplicate: return "duplicate";
    case Errc::missing_semantics: return "missing-semantics";
    case Errc::ill_formed_functor: return "ill-formed-functor";
    case Errc::ill_formed_transformation: return "ill-formed-transformation";
    case Errc::incomplete_transformation: return "incomplete-transformation";
    case Errc::curry_shape: return "curry-shape";
    case Errc::evaluation: return "evaluation";
    case Errc::empty_prompt: return "empty-prompt";
    case Errc::budget_exceeded: return "budget-exceeded";
    case Errc::transport: return "transport";
    case Errc::cache_miss: return "cache-miss";
    case Errc::construction: return "construction";
    case Errc::task_membership: return "task-membership";
    case Errc::missing_dual: return "missing-dual";
    case Errc::missing_slot: return "missing-slot";
    case Errc::parse: return "parse";
    case Errc::degenerate_input: return "degenerate-input";
    case Errc::too_short: return "too-short";
    case Errc::io: return "io";
    case Errc::schema: return "schema";
    case Errc::reference: return "reference";
    case Errc::config: return "config";
  }
  return "unknown";
}

}  // namespace catprompt

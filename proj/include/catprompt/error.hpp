#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catprompt {

enum class Errc {
  composition_mismatch,
  not_found,
  duplicate,
  missing_semantics,
  ill_formed_functor,
  ill_formed_transformation,
  incomplete_transformation,
  curry_shape,
  evaluation,
  empty_prompt,
  budget_exceeded,
  transport,
  cache_miss,
  construction,
  task_membership,
  missing_dual,
  missing_slot,
  parse,
  degenerate_input,
  too_short,
  io,
  schema,
  reference,
  config,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace catprompt

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catprompt/error.hpp"
#include "catprompt/llm/backend.hpp"
#include "catprompt/text/template.hpp"

namespace catprompt::meta {

enum class ListMarker { paren, dot };  // "1)" or "1."

/// A slotted meta-prompt. Roles are found by slot name: the slot mentioning
/// CONTEXT or CONTENT takes the context, the one mentioning TASK takes the
/// task description and an optional one mentioning EXAMPLE takes examples.
struct MetaPromptTemplate {
  std::string name;
  text::Template body;
  std::string context_slot;
  std::string task_slot;
  std::optional<std::string> examples_slot;
  std::size_t expected_count = 5;
  ListMarker marker = ListMarker::paren;
  /// Trailing list opener the body ends with ("1)" or "1. "), empty if none.
  std::string seed;

  /// Throws Error(Errc::parse) when a role is missing, ambiguous, or used
  /// more than once, or when expected_count is 0.
  static MetaPromptTemplate from_source(std::string name, std::string_view source,
                                        std::size_t expected_count = 5);
  static MetaPromptTemplate load(const std::filesystem::path& path, std::size_t expected_count = 5);

  /// "full" (the canonical experiment template) or "short".
  static MetaPromptTemplate builtin(std::string_view name);

  /// A built-in name or a path to a template file.
  static MetaPromptTemplate resolve(const std::string& name_or_path);
};

inline constexpr std::string_view kFullTemplate = "full";
inline constexpr std::string_view kShortTemplate = "short";

/// Raw text of a shipped template file by stem, e.g. "creativity_prompt".
const std::string& builtin_source(std::string_view stem);

/// Byte-exact rendering. The first example fills the examples slot and the
/// rest follow as numbered lines; with no examples the paragraph holding the
/// slot is dropped. Examples given to a template without an examples slot
/// throw Error(Errc::missing_slot).
std::string render_meta_prompt(const MetaPromptTemplate& t, std::string_view task_description,
                               std::string_view context,
                               const std::vector<std::string>& examples = {});

/// Same, and throws Error(Errc::budget_exceeded) if the rendering plus
/// `max_output_tokens` does not fit the budget.
std::string render_meta_prompt(const MetaPromptTemplate& t, std::string_view task_description,
                               std::string_view context, const std::vector<std::string>& examples,
                               const llm::TokenBudget& budget, const llm::Tokenizer& tokenizer,
                               std::size_t max_output_tokens);

struct ParsedList {
  std::vector<std::string> items;
  /// Text before the list or after the expected items was ignored.
  bool extra_text = false;
  /// The completion continued the template's seed, so the first item had no
  /// marker of its own.
  bool seed_recovered = false;
};

/// Carries whatever items were found before the list ran out.
class ListParseError : public Error {
 public:
  ListParseError(const std::string& message, std::vector<std::string> partial)
      : Error(Errc::parse, message), partial_(std::move(partial)) {}

  const std::vector<std::string>& partial() const noexcept { return partial_; }

 private:
  std::vector<std::string> partial_;
};

/// Extracts `expected` items from a numbered list using "1)" or "1." markers.
/// Unmarked lines continue the current item. With `seed` set and no marker
/// on the first non-blank line, that line is item one. Throws ListParseError
/// with fewer than `expected` items.
ParsedList parse_numbered_list(std::string_view completion, std::size_t expected,
                               std::string_view seed = {});

/// "1) a\n2) b" style serialization, the inverse of parsing.
std::string format_numbered_list(const std::vector<std::string>& items,
                                 ListMarker marker = ListMarker::paren);

}  // namespace catprompt::meta
